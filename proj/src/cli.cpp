#include "scgtf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <limits>
#include <ostream>

#include "scgtf/config.hpp"
#include "scgtf/error.hpp"
#include "scgtf/io.hpp"
#include "scgtf/synth.hpp"

namespace scgtf {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kDecimateAboveHz = 1000.0;
constexpr double kAnalysisRateHz = 320.0;

// Flags shared by every subcommand; empty/unset means "not given".
struct CommonFlags {
  std::string config;
  std::string out;
  std::string preset;
  std::string band;
  bool db{false};
  bool pgm{false};
  int order{0};
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file (flags override it)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--preset", f.preset, "parameter preset: x1 or x2");
  cmd->add_option("--band", f.band, "analysis band lo:hi in Hz");
  cmd->add_flag("--db", f.db, "dB heatmap mapping (implies --pgm)");
  cmd->add_flag("--pgm", f.pgm, "write a PGM heatmap");
  cmd->add_option("--order", f.order, "PCT polynomial order");
}

RunConfig build_config(const CommonFlags& f, const std::string& fallback_preset) {
  std::string config_text;
  if (!f.config.empty()) {
    if (!fs::exists(f.config)) throw IoError("config file '" + f.config + "' does not exist");
    config_text = read_text_file(f.config);
  }
  std::string preset = fallback_preset;
  if (!config_text.empty()) {
    if (auto p = config_preset(config_text)) preset = *p;
  }
  if (!f.preset.empty()) preset = f.preset;
  if (preset != "x1" && preset != "x2") throw UsageError("unknown preset '" + preset + "'; valid presets: x1, x2");

  RunConfig cfg;
  cfg.methods = preset_configs(preset);
  if (!config_text.empty()) apply_config_json(config_text, cfg);
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.pgm) cfg.write_heatmap = true;
  if (f.db) {
    cfg.write_heatmap = true;
    cfg.heatmap_scale = HeatmapScale::decibel;
  }
  if (!f.band.empty()) {
    try {
      const Band b = parse_band(f.band);
      cfg.methods.ridge_band_hz = b;
      cfg.methods.pct.ridge_band_hz = b;
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }
  if (f.order != 0) {
    if (f.order < 1) throw UsageError("--order must be >= 1");
    cfg.methods.pct.order = f.order;
  }
  return cfg;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

// Brings high-rate recordings down to the analysis rate.
SampledSignal prepare_input(const SampledSignal& x, int& factor) {
  factor = 1;
  if (x.sample_rate_hz <= kDecimateAboveHz) return x;
  factor = static_cast<int>(std::lround(x.sample_rate_hz / kAnalysisRateHz));
  return decimate(x, factor);
}

ordered_json trajectory_json(const SyntheticComponent& c) {
  ordered_json j;
  j["name"] = c.name;
  j["times_s"] = c.true_if.times_s;
  j["freqs_hz"] = c.true_if.freqs_hz;
  std::vector<int> mask(c.true_if.valid.begin(), c.true_if.valid.end());
  j["valid"] = mask;
  return j;
}

int cmd_synth(const std::string& id, std::uint64_t seed, bool seed_given, const CommonFlags& flags,
              std::ostream& out) {
  if (id != "x1" && id != "x2") throw UsageError("unknown signal id '" + id + "'; valid ids: x1, x2");
  RunConfig cfg = build_config(flags, id);
  if (seed_given) cfg.seed = seed;

  SyntheticSignal sig;
  ordered_json params;
  params["sample_rate_hz"] = kAnalysisRateHz;
  params["duration_s"] = 1.0;
  params["literal_envelope"] = cfg.literal_envelope;
  if (id == "x1") {
    X1Options opt;
    opt.literal_reference = cfg.literal_envelope;
    sig = gen_x1(kAnalysisRateHz, 1.0, opt);
    params["peaks"] = {opt.first_peak, opt.second_peak};
    params["second_tone_gain"] = opt.second_tone_gain;
    params["phase_offsets_rad"] = {opt.phase_20_rad, opt.phase_40_rad};
  } else {
    X2Options opt;
    opt.literal_reference = cfg.literal_envelope;
    opt.snr_scale = cfg.snr_scale;
    sig = gen_x2(kAnalysisRateHz, 1.0, cfg.snr, cfg.seed, opt);
    params["peaks"] = {opt.first_peak, opt.second_peak};
    params["tone_weight"] = opt.tone_weight;
    params["snr"] = cfg.snr;
    params["snr_scale"] = cfg.snr_scale == SnrScale::linear ? "linear" : "db";
    params["seed"] = cfg.seed;
  }

  ordered_json truth;
  truth["signal_id"] = sig.id;
  truth["sample_rate_hz"] = sig.signal.sample_rate_hz;
  truth["n_samples"] = sig.signal.size();
  truth["dominant_component"] = sig.dominant_component;
  truth["parameters"] = params;
  truth["components"] = ordered_json::array();
  for (const auto& c : sig.components) truth["components"].push_back(trajectory_json(c));

  const std::string csv = signal_csv(sig.signal);
  const std::string truth_text = truth.dump(2) + "\n";
  ensure_dir(cfg.out_dir);
  write_file_atomic(cfg.out_dir / (id + ".csv"), csv);
  write_file_atomic(cfg.out_dir / (id + ".truth.json"), truth_text);
  out << "wrote " << (cfg.out_dir / (id + ".csv")).string() << " and "
      << (cfg.out_dir / (id + ".truth.json")).string() << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& input, const std::string& method_name, const CommonFlags& flags,
                std::ostream& out) {
  TfdMethod method;
  try {
    method = tfd_method_from_string(method_name);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  RunConfig cfg = build_config(flags, "x1");
  const SampledSignal raw = read_signal(input);
  int factor = 1;
  const SampledSignal x = prepare_input(raw, factor);

  TfdGrid g = run_method(x, method, cfg.methods);
  g.meta.decimation_factor = factor;
  const auto res = resolution_report(g);
  if (cfg.methods.ridge_band_hz && cfg.methods.ridge_band_hz->second > res.folding_hz && !flags.band.empty()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "analysis band upper edge %.4g Hz exceeds folding frequency %.4g Hz",
                  cfg.methods.ridge_band_hz->second, res.folding_hz);
    g.meta.warnings.emplace_back(buf);
  }

  std::string mapping;
  Heatmap heat;
  if (cfg.write_heatmap) {
    heat = render_heatmap(g, cfg.heatmap_scale);
    mapping = heat.mapping;
  }
  const std::string csv = grid_csv(g);
  const std::string meta = grid_meta_json(g, mapping);

  const std::string stem = fs::path(input).stem().string() + "." + to_string(method);
  ensure_dir(cfg.out_dir);
  write_file_atomic(cfg.out_dir / (stem + ".csv"), csv);
  write_file_atomic(cfg.out_dir / (stem + ".json"), meta);
  if (cfg.write_heatmap) write_file_atomic(cfg.out_dir / (stem + ".pgm"), heat.pgm);
  for (const auto& w : g.meta.warnings) out << "warning: " << w << "\n";
  out << "wrote " << (cfg.out_dir / (stem + ".csv")).string() << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& input, const std::string& truth_path, const std::string& methods,
                const std::string& scoring, const CommonFlags& flags, std::ostream& out) {
  std::optional<TruthFile> truth;
  if (!truth_path.empty()) {
    if (!fs::exists(truth_path)) throw IoError("truth file '" + truth_path + "' does not exist");
    truth = parse_truth_json(read_text_file(truth_path));
  }
  const std::string fallback = (truth && truth->signal_id == "x2") ? "x2" : "x1";
  RunConfig cfg = build_config(flags, fallback);
  if (!methods.empty()) {
    try {
      cfg.method_set = parse_method_list(methods);
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
  }
  if (!scoring.empty()) {
    try {
      cfg.methods.scoring = scoring_from_string(scoring);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  const SampledSignal raw = read_signal(input);
  int factor = 1;
  const SampledSignal x = prepare_input(raw, factor);

  std::optional<std::vector<IFTrajectory>> traj;
  std::string signal_id = fs::path(input).stem().string();
  if (truth) {
    for (const auto& t : truth->trajectories) {
      if (t.size() != raw.size()) {
        throw ValidationError("truth has " + std::to_string(t.size()) + " samples but the signal has " +
                              std::to_string(raw.size()));
      }
    }
    if (std::abs(truth->sample_rate_hz - raw.sample_rate_hz) > 1e-6 * raw.sample_rate_hz) {
      throw ValidationError("truth sample rate does not match the signal");
    }
    std::vector<double> times(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) times[i] = x.time_at(i);
    traj.emplace();
    for (const auto& t : truth->trajectories) traj->push_back(factor == 1 ? t : resample_nearest(t, times));
    cfg.methods.dominant_component = truth->dominant_component;
    if (!truth->signal_id.empty()) signal_id = truth->signal_id;
  }

  ComparisonReport report = compare_methods(x, traj, cfg.method_set, cfg.methods, signal_id);
  for (auto& e : report.entries) e.meta.decimation_factor = factor;
  const std::string json_text = report.to_json();
  const std::string text = report.to_text();
  ensure_dir(cfg.out_dir);
  write_file_atomic(cfg.out_dir / "report.json", json_text);
  write_file_atomic(cfg.out_dir / "report.txt", text);
  out << text;
  return kExitOk;
}

}  // namespace

TruthFile parse_truth_json(const std::string& text) {
  TruthFile t;
  try {
    const auto j = nlohmann::json::parse(text);
    t.signal_id = j.value("signal_id", "");
    t.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    t.dominant_component = j.value("dominant_component", std::size_t{0});
    for (const auto& c : j.at("components")) {
      IFTrajectory tr;
      tr.times_s = c.at("times_s").get<std::vector<double>>();
      tr.freqs_hz = c.at("freqs_hz").get<std::vector<double>>();
      for (const auto& v : c.at("valid")) tr.valid.push_back(v.is_boolean() ? v.get<bool>() : v.get<int>() != 0);
      t.trajectories.push_back(std::move(tr));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed truth file: ") + e.what());
  }
  if (t.trajectories.empty()) throw ValidationError("truth file lists no components");
  if (t.dominant_component >= t.trajectories.size()) throw ValidationError("dominant_component out of range");
  for (const auto& tr : t.trajectories) {
    try {
      tr.validate();
    } catch (const InvalidArgument& e) {
      throw ValidationError(std::string("truth trajectory: ") + e.what());
    }
  }
  return t;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-frequency analysis of cardiac vibration signals"};
  app.require_subcommand(1);

  CommonFlags synth_flags, analyze_flags, compare_flags;
  std::string synth_id;
  std::uint64_t seed = 1;
  auto* synth = app.add_subcommand("synth", "generate a synthetic test signal and its IF ground truth");
  synth->add_option("id", synth_id, "signal id (x1 or x2)")->required();
  auto* seed_opt = synth->add_option("--seed", seed, "noise seed");
  add_common(synth, synth_flags);

  std::string analyze_input, method;
  auto* analyze = app.add_subcommand("analyze", "compute one time-frequency distribution");
  analyze->add_option("input", analyze_input, "signal file (.csv or .wav)")->required();
  analyze->add_option("--method", method, "stft | wvd | pwvd | spwvd | pct")->required();
  add_common(analyze, analyze_flags);

  std::string compare_input, truth_path, methods, scoring;
  auto* compare = app.add_subcommand("compare", "score several distributions against ground truth");
  compare->add_option("input", compare_input, "signal file (.csv or .wav)")->required();
  compare->add_option("--truth", truth_path, "ground-truth JSON written by synth");
  compare->add_option("--methods", methods, "comma-separated methods (default stft,pct,wvd,spwvd)");
  compare->add_option("--scoring", scoring, "nearest (default) or dominant");
  add_common(compare, compare_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_id, seed, seed_opt->count() > 0, synth_flags, out);
    if (analyze->parsed()) return cmd_analyze(analyze_input, method, analyze_flags, out);
    return cmd_compare(compare_input, truth_path, methods, scoring, compare_flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InsufficientData& e) {
    err << "insufficient data: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace scgtf
