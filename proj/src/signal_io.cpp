#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scgtf/error.hpp"
#include "scgtf/io.hpp"

namespace scgtf {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_binary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string f = trim(field);
  char* end = nullptr;
  const double v = std::strtod(f.c_str(), &end);
  if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v)) {
    throw ValidationError("line " + std::to_string(line) + ": '" + f + "' is not a finite number");
  }
  return v;
}

}  // namespace

SampledSignal read_signal_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "time_s,amplitude") {
    throw ValidationError("'" + path.string() + "': expected header 'time_s,amplitude'");
  }
  std::vector<double> times;
  SampledSignal x;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": missing comma");
    times.push_back(parse_number(line.substr(0, comma), lineno));
    x.samples.push_back(parse_number(line.substr(comma + 1), lineno));
  }
  if (x.samples.size() < 2) throw ValidationError("'" + path.string() + "' needs at least two samples");

  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw ValidationError("time column must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-3 * dt) {
      throw ValidationError("time column is not uniformly sampled near line " + std::to_string(i + 2));
    }
  }
  double rate = 1.0 / dt;
  const double snapped = std::round(rate);
  if (std::abs(rate - snapped) <= 1e-6 * rate) rate = snapped;
  x.sample_rate_hz = rate;
  x.start_time_s = times.front();
  return x;
}

std::string signal_csv(const SampledSignal& x) {
  x.validate();
  std::string out = "time_s,amplitude\n";
  char buf[96];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.17g\n", x.time_at(i), x.samples[i]);
    out += buf;
  }
  return out;
}

SampledSignal read_wav(const fs::path& path) {
  const auto bytes = read_binary(path);
  const auto bad = [&](const std::string& why) { return ValidationError("'" + path.string() + "': " + why); };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw bad("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t len = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw bad("truncated fmt chunk");
      format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == 0xFFFE && avail >= 26) format = le16(chunk + 8 + 24);  // extensible sub-format
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + len + (len & 1u);
  }
  if (format == 0 || data == nullptr) throw bad("missing fmt or data chunk");
  if (channels != 1) throw bad("only mono WAV is supported (got " + std::to_string(channels) + " channels)");
  if (rate == 0) throw bad("sample rate is zero");

  SampledSignal x;
  x.sample_rate_hz = static_cast<double>(rate);
  if (format == 1 && bits == 16) {
    for (std::size_t i = 0; i + 2 <= data_len; i += 2) {
      x.samples.push_back(static_cast<std::int16_t>(le16(data + i)) / 32768.0);
    }
  } else if (format == 3 && bits == 32) {
    for (std::size_t i = 0; i + 4 <= data_len; i += 4) {
      const std::uint32_t u = le32(data + i);
      float f;
      std::memcpy(&f, &u, 4);
      x.samples.push_back(static_cast<double>(f));
    }
  } else {
    throw bad("unsupported sample format (need 16-bit PCM or 32-bit float)");
  }
  if (x.samples.empty()) throw bad("no samples");
  return x;
}

std::vector<std::uint8_t> wav_bytes(const SampledSignal& x, WavSampleFormat fmt) {
  x.validate();
  const std::uint16_t bits = fmt == WavSampleFormat::pcm16 ? 16 : 32;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(x.sample_rate_hz));
  const std::uint32_t data_len = static_cast<std::uint32_t>(x.size() * (bits / 8));
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_len);
  for (char c : std::string("RIFF")) out.push_back(static_cast<std::uint8_t>(c));
  put32(out, 36 + data_len);
  for (char c : std::string("WAVEfmt ")) out.push_back(static_cast<std::uint8_t>(c));
  put32(out, 16);
  put16(out, fmt == WavSampleFormat::pcm16 ? 1 : 3);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * (bits / 8));
  put16(out, bits / 8);
  put16(out, bits);
  for (char c : std::string("data")) out.push_back(static_cast<std::uint8_t>(c));
  put32(out, data_len);
  for (double v : x.samples) {
    if (fmt == WavSampleFormat::pcm16) {
      const double s = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
    } else {
      const float f = static_cast<float>(v);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put32(out, u);
    }
  }
  return out;
}

SampledSignal read_signal(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("input '" + path.string() + "' does not exist");
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".csv") return read_signal_csv(path);
  if (ext == ".wav") return read_wav(path);
  throw ValidationError("unsupported input extension '" + ext + "' (expected .csv or .wav)");
}

void write_file_atomic(const fs::path& path, const std::vector<std::uint8_t>& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(contents.data()), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  write_file_atomic(path, std::vector<std::uint8_t>(contents.begin(), contents.end()));
}

std::string read_text_file(const fs::path& path) {
  const auto bytes = read_binary(path);
  return {bytes.begin(), bytes.end()};
}

}  // namespace scgtf
