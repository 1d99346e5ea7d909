#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scgtf/cli.hpp"
#include "scgtf/io.hpp"
#include "scgtf/synth.hpp"
#include "tmpdir.hpp"

using namespace scgtf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "scgtf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

std::size_t file_count(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes the signal and its ground truth") {
  TempDir dir;
  const auto r = run({"synth", "x1", "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto x = read_signal(dir / "x1.csv");
  CHECK(x.size() == 320);
  CHECK(x.sample_rate_hz == 320.0);
  CHECK(x.duration_s() == doctest::Approx(1.0));
  const auto truth = parse_truth_json(slurp(dir / "x1.truth.json"));
  CHECK(truth.signal_id == "x1");
  CHECK(truth.trajectories.size() == 2);
  CHECK(truth.trajectories[0].size() == 320);
  CHECK(file_count(dir.path()) == 2);
}

TEST_CASE("synth is byte-for-byte repeatable") {
  TempDir a, b;
  REQUIRE(run({"synth", "x2", "--seed", "7", "--out", a.path().string()}).code == 0);
  REQUIRE(run({"synth", "x2", "--seed", "7", "--out", b.path().string()}).code == 0);
  CHECK(slurp(a / "x2.csv") == slurp(b / "x2.csv"));
  CHECK(slurp(a / "x2.truth.json") == slurp(b / "x2.truth.json"));
  REQUIRE(run({"synth", "x2", "--seed", "8", "--out", b.path().string()}).code == 0);
  CHECK(slurp(a / "x2.csv") != slurp(b / "x2.csv"));
}

TEST_CASE("unknown signal id is a usage error listing the valid ids") {
  TempDir dir;
  const auto r = run({"synth", "x3", "--out", dir.path().string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("x1") != std::string::npos);
  CHECK(r.err.find("x2") != std::string::npos);
  CHECK(file_count(dir.path()) == 0);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("analyze a missing file fails without output") {
  TempDir dir;
  const auto out = dir / "out";
  const auto r = run({"analyze", (dir / "nope.csv").string(), "--method", "stft", "--out", out.string()});
  CHECK(r.code == 4);
  CHECK(file_count(out) == 0);
  CHECK(run({"analyze", (dir / "nope.csv").string(), "--method", "cwt"}).code == 2);
}

TEST_CASE("analyze decimates high-rate recordings") {
  TempDir dir;
  SampledSignal x{std::vector<double>(3200), 3200.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] = std::sin(2.0 * M_PI * 20.0 * static_cast<double>(i) / 3200.0);
  write_file_atomic(dir / "rec.wav", wav_bytes(x));
  const auto r = run({"analyze", (dir / "rec.wav").string(), "--method", "stft", "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto meta = nlohmann::json::parse(slurp(dir / "rec.stft.json"));
  CHECK(meta["decimation_factor"] == 10);
  CHECK(meta["sample_rate_hz"] == 320.0);
}

TEST_CASE("analyze spwvd of x1 peaks at both tones") {
  TempDir dir;
  REQUIRE(run({"synth", "x1", "--out", dir.path().string()}).code == 0);
  const auto r = run({"analyze", (dir / "x1.csv").string(), "--method", "spwvd", "--out", dir.path().string(),
                      "--pgm"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "x1.spwvd.pgm"));
  const auto meta = nlohmann::json::parse(slurp(dir / "x1.spwvd.json"));
  CHECK(meta["heatmap"] == "signed-linear");

  // Rebuild the PSD from the written matrix.
  std::ifstream in(dir / "x1.spwvd.csv");
  std::string line;
  std::getline(in, line);
  std::vector<double> freqs;
  {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    while (std::getline(ss, cell, ',')) freqs.push_back(std::stod(cell));
  }
  Psd psd;
  psd.freqs_hz = freqs;
  psd.power.assign(freqs.size(), 0.0);
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    for (std::size_t k = 0; std::getline(ss, cell, ','); ++k) psd.power[k] += std::abs(std::stod(cell));
  }
  const auto peaks = psd_peaks(psd, -20.0);
  CHECK(std::any_of(peaks.begin(), peaks.end(), [](double f) { return std::abs(f - 20.0) <= 1.0; }));
  CHECK(std::any_of(peaks.begin(), peaks.end(), [](double f) { return std::abs(f - 40.0) <= 1.0; }));
  CHECK(psd_peaks(psd, -20.0, Band{25.0, 35.0}).empty());
}

TEST_CASE("compare x2 against its ground truth") {
  TempDir dir;
  REQUIRE(run({"synth", "x2", "--out", dir.path().string()}).code == 0);
  const auto out = dir / "cmp";
  const auto r = run({"compare", (dir / "x2.csv").string(), "--truth", (dir / "x2.truth.json").string(), "--out",
                      out.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(j["signal_id"] == "x2");
  REQUIRE(j["methods"].size() == 4);
  double worst = 0.0;
  std::string worst_method;
  for (const auto& m : j["methods"]) {
    if (m["nrmse"].get<double>() > worst) {
      worst = m["nrmse"].get<double>();
      worst_method = m["method"];
    }
  }
  CHECK(worst_method == "wvd");
  CHECK(fs::exists(out / "report.txt"));

  // Rerunning reproduces the files exactly.
  const auto first = slurp(out / "report.json");
  REQUIRE(run({"compare", (dir / "x2.csv").string(), "--truth", (dir / "x2.truth.json").string(), "--out",
               out.string()})
              .code == 0);
  CHECK(slurp(out / "report.json") == first);
}

TEST_CASE("compare without truth reports dominant frequencies only") {
  TempDir dir;
  REQUIRE(run({"synth", "x1", "--out", dir.path().string()}).code == 0);
  const auto r = run({"compare", (dir / "x1.csv").string(), "--methods", "stft", "--out", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  REQUIRE(j["methods"].size() == 1);
  CHECK_FALSE(j["methods"][0].contains("nrmse"));
  CHECK(j["methods"][0]["dominant_freq_hz"].get<double>() == doctest::Approx(20.0).epsilon(0.05));
}

TEST_CASE("compare validation and usage errors") {
  TempDir dir;
  REQUIRE(run({"synth", "x1", "--out", dir.path().string()}).code == 0);
  REQUIRE(run({"synth", "x2", "--out", (dir / "other").string()}).code == 0);
  // Truth for a different-length signal.
  SampledSignal shorter = read_signal(dir / "x1.csv");
  shorter.samples.resize(300);
  write_file_atomic(dir / "short.csv", signal_csv(shorter));
  const auto out = dir / "bad";
  auto r = run({"compare", (dir / "short.csv").string(), "--truth", (dir / "x1.truth.json").string(), "--out",
                out.string()});
  CHECK(r.code == 3);
  CHECK(file_count(out) == 0);

  CHECK(run({"compare", (dir / "x1.csv").string(), "--band", "70:5"}).code == 2);
  CHECK(run({"compare", (dir / "x1.csv").string(), "--methods", "stft,cwt"}).code == 2);
  CHECK(run({"compare", (dir / "x1.csv").string(), "--truth", (dir / "none.json").string()}).code == 4);
}

TEST_CASE("config file values are overridden by flags") {
  TempDir dir;
  REQUIRE(run({"synth", "x1", "--out", dir.path().string()}).code == 0);
  std::ofstream(dir / "cfg.json") << R"({"methods": ["stft", "spwvd"], "stft": {"fft_length": 256},
                                        "out": ")" << (dir / "from_config").string() << R"("})";
  auto r = run({"compare", (dir / "x1.csv").string(), "--config", (dir / "cfg.json").string()});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "from_config" / "report.json"));
  REQUIRE(j["methods"].size() == 2);
  CHECK(j["methods"][0]["fft_length"] == 256);

  r = run({"compare", (dir / "x1.csv").string(), "--config", (dir / "cfg.json").string(), "--methods", "stft",
           "--out", (dir / "from_flag").string()});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(slurp(dir / "from_flag" / "report.json"));
  CHECK(j["methods"].size() == 1);

  std::ofstream(dir / "typo.json") << R"({"stft": {"fft_lenght": 256}})";
  CHECK(run({"compare", (dir / "x1.csv").string(), "--config", (dir / "typo.json").string()}).code == 3);
  CHECK(run({"compare", (dir / "x1.csv").string(), "--config", (dir / "absent.json").string()}).code == 4);
}

TEST_CASE("pct order flag reaches the kernel") {
  TempDir dir;
  REQUIRE(run({"synth", "x1", "--out", dir.path().string()}).code == 0);
  REQUIRE(run({"analyze", (dir / "x1.csv").string(), "--method", "pct", "--order", "3", "--out",
               dir.path().string(), "--db"})
              .code == 0);
  const auto meta = nlohmann::json::parse(slurp(dir / "x1.pct.json"));
  CHECK(meta["kernel_coeffs"].size() == 3);
  CHECK(meta["heatmap"] == "db(-60)");
}

}  // TEST_SUITE
