#include "scgtf/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "scgtf/error.hpp"

namespace scgtf {

using nlohmann::json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ValidationError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + " has the wrong type");
  }
}

std::size_t get_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ValidationError(where + " must be a non-negative integer");
  return j.get<std::size_t>();
}

WindowSpec parse_window(const json& j, WindowSpec w, const std::string& where) {
  require_keys(j, {"kind", "length", "alpha", "periodic"}, where);
  try {
    if (j.contains("kind")) w.kind = window_kind_from_string(get<std::string>(j["kind"], where + ".kind"));
  } catch (const InvalidArgument& e) {
    throw ValidationError(where + ": " + e.what());
  }
  if (j.contains("length")) w.length_samples = get_count(j["length"], where + ".length");
  if (j.contains("alpha")) w.gaussian_alpha = get<double>(j["alpha"], where + ".alpha");
  if (j.contains("periodic")) w.periodic = get<bool>(j["periodic"], where + ".periodic");
  if (w.length_samples == 0) throw ValidationError(where + ".length must be >= 1");
  return w;
}

std::optional<Band> parse_optional_band(const json& j, const std::string& where) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(where + " must be [low, high] or null");
  }
  Band b{j[0].get<double>(), j[1].get<double>()};
  if (!(b.first < b.second)) throw ValidationError(where + " must satisfy low < high");
  return b;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

std::optional<std::string> config_preset(const std::string& text) {
  const json j = parse_document(text);
  if (j.is_object() && j.contains("preset")) return get<std::string>(j["preset"], "preset");
  return std::nullopt;
}

void apply_config_json(const std::string& text, RunConfig& cfg) {
  const json root = parse_document(text);
  require_keys(root,
               {"preset", "methods", "seed", "out", "snr", "snr_scale", "literal_envelope", "render",
                "ridge_band_hz", "amp_threshold_frac", "dominant_band_hz", "scoring", "stft", "wvd", "pwvd",
                "spwvd", "pct"},
               "config");
  auto& m = cfg.methods;

  if (root.contains("methods")) {
    const auto& list = root["methods"];
    if (!list.is_array()) throw ValidationError("methods must be an array of names");
    std::string joined;
    for (const auto& name : list) joined += (joined.empty() ? "" : ",") + get<std::string>(name, "methods[]");
    cfg.method_set = parse_method_list(joined);
  }
  if (root.contains("seed")) cfg.seed = get<std::uint64_t>(root["seed"], "seed");
  if (root.contains("out")) cfg.out_dir = get<std::string>(root["out"], "out");
  if (root.contains("snr")) cfg.snr = get<double>(root["snr"], "snr");
  if (root.contains("snr_scale")) {
    const auto s = get<std::string>(root["snr_scale"], "snr_scale");
    if (s == "linear") cfg.snr_scale = SnrScale::linear;
    else if (s == "db") cfg.snr_scale = SnrScale::decibel;
    else throw ValidationError("snr_scale must be 'linear' or 'db'");
  }
  if (root.contains("literal_envelope")) cfg.literal_envelope = get<bool>(root["literal_envelope"], "literal_envelope");
  if (root.contains("render")) {
    const auto& r = root["render"];
    require_keys(r, {"pgm", "db"}, "render");
    if (r.contains("pgm")) cfg.write_heatmap = get<bool>(r["pgm"], "render.pgm");
    if (r.contains("db") && get<bool>(r["db"], "render.db")) {
      cfg.heatmap_scale = HeatmapScale::decibel;
      cfg.write_heatmap = true;
    }
  }
  if (root.contains("ridge_band_hz")) m.ridge_band_hz = parse_optional_band(root["ridge_band_hz"], "ridge_band_hz");
  if (root.contains("dominant_band_hz")) {
    m.dominant_band_hz = parse_optional_band(root["dominant_band_hz"], "dominant_band_hz");
  }
  if (root.contains("amp_threshold_frac")) {
    m.amp_threshold_frac = get<double>(root["amp_threshold_frac"], "amp_threshold_frac");
  }
  if (root.contains("scoring")) {
    try {
      m.scoring = scoring_from_string(get<std::string>(root["scoring"], "scoring"));
    } catch (const InvalidArgument& e) {
      throw ValidationError(e.what());
    }
  }
  if (root.contains("stft")) {
    const auto& s = root["stft"];
    require_keys(s, {"window", "hop", "fft_length"}, "stft");
    if (s.contains("window")) m.stft.window = parse_window(s["window"], m.stft.window, "stft.window");
    if (s.contains("hop")) m.stft.hop_samples = get_count(s["hop"], "stft.hop");
    if (s.contains("fft_length")) m.stft.fft_length = get_count(s["fft_length"], "stft.fft_length");
  }
  if (root.contains("wvd")) {
    const auto& s = root["wvd"];
    require_keys(s, {"fft_length", "max_bin_spacing_hz", "use_analytic"}, "wvd");
    if (s.contains("fft_length")) m.wvd.fft_length = get_count(s["fft_length"], "wvd.fft_length");
    if (s.contains("max_bin_spacing_hz")) m.wvd.max_bin_spacing_hz = get<double>(s["max_bin_spacing_hz"], "wvd.max_bin_spacing_hz");
    if (s.contains("use_analytic")) m.wvd.use_analytic = get<bool>(s["use_analytic"], "wvd.use_analytic");
  }
  if (root.contains("pwvd")) {
    const auto& s = root["pwvd"];
    require_keys(s, {"lag_window"}, "pwvd");
    if (s.contains("lag_window")) m.pwvd_lag_window = parse_window(s["lag_window"], m.pwvd_lag_window, "pwvd.lag_window");
  }
  if (root.contains("spwvd")) {
    const auto& s = root["spwvd"];
    require_keys(s, {"time_window", "lag_window", "fft_length", "max_bin_spacing_hz", "use_analytic"}, "spwvd");
    if (s.contains("time_window")) m.spwvd.time_window = parse_window(s["time_window"], m.spwvd.time_window, "spwvd.time_window");
    if (s.contains("lag_window")) m.spwvd.lag_window = parse_window(s["lag_window"], m.spwvd.lag_window, "spwvd.lag_window");
    if (s.contains("fft_length")) m.spwvd.fft_length = get_count(s["fft_length"], "spwvd.fft_length");
    if (s.contains("max_bin_spacing_hz")) m.spwvd.max_bin_spacing_hz = get<double>(s["max_bin_spacing_hz"], "spwvd.max_bin_spacing_hz");
    if (s.contains("use_analytic")) m.spwvd.use_analytic = get<bool>(s["use_analytic"], "spwvd.use_analytic");
  }
  if (root.contains("pct")) {
    const auto& s = root["pct"];
    require_keys(s, {"order", "max_iterations", "ridge_band_hz", "convergence_tol_hz", "window", "hop", "fft_length",
                     "amp_threshold_frac"},
                 "pct");
    auto& p = m.pct;
    if (s.contains("order")) p.order = get<int>(s["order"], "pct.order");
    if (s.contains("max_iterations")) p.max_iterations = get<int>(s["max_iterations"], "pct.max_iterations");
    if (s.contains("ridge_band_hz")) p.ridge_band_hz = parse_optional_band(s["ridge_band_hz"], "pct.ridge_band_hz");
    if (s.contains("convergence_tol_hz")) p.convergence_tol_hz = get<double>(s["convergence_tol_hz"], "pct.convergence_tol_hz");
    if (s.contains("window")) p.window = parse_window(s["window"], p.window, "pct.window");
    if (s.contains("hop")) p.hop_samples = get_count(s["hop"], "pct.hop");
    if (s.contains("fft_length")) p.fft_length = get_count(s["fft_length"], "pct.fft_length");
    if (s.contains("amp_threshold_frac")) p.amp_threshold_frac = get<double>(s["amp_threshold_frac"], "pct.amp_threshold_frac");
    try {
      p.validate();
    } catch (const InvalidArgument& e) {
      throw ValidationError(e.what());
    }
  }
}

Band parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("band '" + text + "' must look like lo:hi");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo_s = text.substr(0, colon), hi_s = text.substr(colon + 1);
    const double lo = std::stod(lo_s, &used_lo);
    const double hi = std::stod(hi_s, &used_hi);
    if (used_lo != lo_s.size() || used_hi != hi_s.size()) throw std::invalid_argument("trailing text");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("order");
    return {lo, hi};
  } catch (const std::exception&) {
    throw ValidationError("band '" + text + "' must be lo:hi with finite lo < hi");
  }
}

std::vector<TfdMethod> parse_method_list(const std::string& text) {
  std::vector<TfdMethod> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    TfdMethod m;
    try {
      m = tfd_method_from_string(item);
    } catch (const InvalidArgument& e) {
      throw ValidationError(e.what());
    }
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw ValidationError("no methods given");
  return out;
}

}  // namespace scgtf
