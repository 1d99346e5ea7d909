#include "scgtf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "scgtf/error.hpp"

namespace scgtf {

namespace {

std::pair<std::size_t, std::size_t> band_bins(const std::vector<double>& freqs, const std::optional<Band>& band) {
  if (!band) return {0, freqs.size()};
  if (!(band->first <= band->second)) throw InvalidArgument("band must satisfy low <= high");
  const auto lo = std::lower_bound(freqs.begin(), freqs.end(), band->first) - freqs.begin();
  const auto hi = std::upper_bound(freqs.begin(), freqs.end(), band->second) - freqs.begin();
  if (lo >= hi) throw InvalidArgument("band does not intersect the frequency axis");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

void require_same_grid(const IFTrajectory& a, const IFTrajectory& b) {
  a.validate();
  b.validate();
  if (a.size() != b.size()) throw InvalidArgument("trajectories have different lengths");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({1.0, std::abs(a.times_s[i]), std::abs(b.times_s[i])});
    if (std::abs(a.times_s[i] - b.times_s[i]) > 1e-9 * scale) {
      throw InvalidArgument("trajectories are on different time grids");
    }
  }
}

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::size_t IFTrajectory::count_valid() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

void IFTrajectory::validate() const {
  if (freqs_hz.size() != times_s.size() || valid.size() != times_s.size()) {
    throw InvalidArgument("trajectory fields differ in length");
  }
  for (std::size_t i = 1; i < times_s.size(); ++i) {
    if (!(times_s[i] > times_s[i - 1])) throw InvalidArgument("trajectory times not strictly increasing");
  }
  for (std::size_t i = 0; i < times_s.size(); ++i) {
    if (valid[i] && !std::isfinite(freqs_hz[i])) throw InvalidArgument("valid trajectory entry is not finite");
  }
}

IFTrajectory extract_ridge(const TfdGrid& g, std::optional<Band> band, double amp_threshold_frac) {
  if (g.empty()) throw InvalidArgument("empty grid");
  if (!(amp_threshold_frac >= 0.0 && amp_threshold_frac < 1.0)) {
    throw InvalidArgument("amp_threshold_frac must be in [0, 1)");
  }
  const auto [lo, hi] = band_bins(g.freqs_hz, band);
  const bool magnitude = is_wigner_family(g.method);

  IFTrajectory r;
  r.times_s = g.times_s;
  r.freqs_hz.assign(g.n_times(), 0.0);
  r.valid.assign(g.n_times(), false);
  std::vector<double> peak(g.n_times(), 0.0);
  double top = 0.0;
  for (std::size_t t = 0; t < g.n_times(); ++t) {
    const auto row = g.row(t);
    std::size_t best = lo;
    double best_v = -1.0;
    for (std::size_t f = lo; f < hi; ++f) {
      const double v = magnitude ? std::abs(row[f]) : row[f];
      if (v > best_v) {
        best_v = v;
        best = f;
      }
    }
    r.freqs_hz[t] = g.freqs_hz[best];
    peak[t] = best_v;
    top = std::max(top, best_v);
  }
  if (top > 0.0) {
    for (std::size_t t = 0; t < g.n_times(); ++t) r.valid[t] = peak[t] >= amp_threshold_frac * top;
  }
  return r;
}

double rmse(const IFTrajectory& actual, const IFTrajectory& estimated) {
  require_same_grid(actual, estimated);
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!actual.valid[i] || !estimated.valid[i]) continue;
    const double d = actual.freqs_hz[i] - estimated.freqs_hz[i];
    acc += d * d;
    ++n;
  }
  if (n == 0) throw InsufficientData("no index is valid in both trajectories");
  return std::sqrt(acc / static_cast<double>(n));
}

double nrmse(const IFTrajectory& actual, const IFTrajectory& estimated) {
  const double err = rmse(actual, estimated);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual.valid[i] && estimated.valid[i]) {
      sum += actual.freqs_hz[i];
      ++n;
    }
  }
  const double mean = sum / static_cast<double>(n);
  if (!(mean > 0.0)) throw InvalidArgument("mean actual IF must be positive");
  return err / mean;
}

double dominant_frequency(const TfdGrid& g, std::optional<Band> band) {
  const Psd psd = psd_from_tfd(g);
  const auto [lo, hi] = band_bins(psd.freqs_hz, band);
  const auto it = std::max_element(psd.power.begin() + static_cast<std::ptrdiff_t>(lo),
                                   psd.power.begin() + static_cast<std::ptrdiff_t>(hi));
  return psd.freqs_hz[static_cast<std::size_t>(it - psd.power.begin())];
}

IFTrajectory resample_nearest(const IFTrajectory& truth, const std::vector<double>& times_s) {
  truth.validate();
  if (truth.size() == 0) throw InvalidArgument("empty truth trajectory");
  IFTrajectory out;
  out.times_s = times_s;
  out.freqs_hz.resize(times_s.size());
  out.valid.resize(times_s.size());
  for (std::size_t i = 0; i < times_s.size(); ++i) {
    const auto it = std::lower_bound(truth.times_s.begin(), truth.times_s.end(), times_s[i]);
    auto j = static_cast<std::size_t>(it - truth.times_s.begin());
    if (j == truth.size()) {
      j = truth.size() - 1;
    } else if (j > 0 && times_s[i] - truth.times_s[j - 1] <= truth.times_s[j] - times_s[i]) {
      --j;
    }
    out.freqs_hz[i] = truth.freqs_hz[j];
    out.valid[i] = truth.valid[j];
  }
  return out;
}

const char* to_string(Scoring s) { return s == Scoring::nearest ? "nearest" : "dominant"; }

Scoring scoring_from_string(const std::string& name) {
  if (name == "nearest") return Scoring::nearest;
  if (name == "dominant") return Scoring::dominant;
  throw InvalidArgument("unknown scoring mode '" + name + "' (expected nearest or dominant)");
}

IFTrajectory match_truth(const IFTrajectory& estimated, const std::vector<IFTrajectory>& truths,
                         Scoring scoring, std::size_t dominant_component) {
  if (truths.empty()) throw InvalidArgument("no truth trajectories");
  for (const auto& t : truths) {
    if (t.size() != estimated.size()) throw InvalidArgument("truth not on the ridge time grid");
  }
  if (scoring == Scoring::dominant) {
    if (dominant_component >= truths.size()) throw InvalidArgument("dominant component out of range");
    return truths[dominant_component];
  }
  IFTrajectory out;
  out.times_s = estimated.times_s;
  out.freqs_hz.assign(estimated.size(), 0.0);
  out.valid.assign(estimated.size(), false);
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : truths) {
      if (!t.valid[i]) continue;
      const double d = std::abs(t.freqs_hz[i] - estimated.freqs_hz[i]);
      if (d < best) {
        best = d;
        out.freqs_hz[i] = t.freqs_hz[i];
        out.valid[i] = true;
      }
    }
  }
  return out;
}

MethodConfigs preset_configs(const std::string& name) {
  MethodConfigs cfg;
  if (name == "x1") {
    cfg.stft.fft_length = 512;
  } else if (name == "x2") {
    cfg.stft.fft_length = 128;
    cfg.dominant_component = 1;
  } else {
    throw InvalidArgument("unknown preset '" + name + "' (expected x1 or x2)");
  }
  return cfg;
}

TfdGrid run_method(const SampledSignal& x, TfdMethod method, const MethodConfigs& cfg) {
  const auto wfft = [&](std::size_t requested, double spacing) {
    return wigner_fft_length(requested, x.size(), x.sample_rate_hz, spacing);
  };
  switch (method) {
    case TfdMethod::stft:
      return stft(x, cfg.stft);
    case TfdMethod::wvd:
      return wvd(x, wfft(cfg.wvd.fft_length, cfg.wvd.max_bin_spacing_hz), cfg.wvd.use_analytic);
    case TfdMethod::pwvd:
      return pwvd(x, cfg.pwvd_lag_window, wfft(cfg.wvd.fft_length, cfg.wvd.max_bin_spacing_hz),
                  cfg.wvd.use_analytic);
    case TfdMethod::spwvd:
      return spwvd(x, cfg.spwvd);
    case TfdMethod::pct:
      return pct_auto(x, cfg.pct);
  }
  throw InvalidArgument("unknown method");
}

const MethodResult* ComparisonReport::find(TfdMethod m) const {
  for (const auto& e : entries) {
    if (e.method == m) return &e;
  }
  return nullptr;
}

ComparisonReport compare_methods(const SampledSignal& x,
                                 const std::optional<std::vector<IFTrajectory>>& truth,
                                 const std::vector<TfdMethod>& methods, const MethodConfigs& cfg,
                                 const std::string& signal_id) {
  if (methods.empty()) throw InvalidArgument("no methods requested");
  x.validate();
  if (truth) {
    if (truth->empty()) throw ValidationError("truth contains no trajectories");
    for (const auto& t : *truth) {
      t.validate();
      if (t.size() != x.size()) {
        throw ValidationError("truth trajectory has " + std::to_string(t.size()) +
                              " samples but the signal has " + std::to_string(x.size()));
      }
    }
  }

  ComparisonReport report;
  report.signal_id = signal_id;
  report.scoring = cfg.scoring;
  for (const auto m : methods) {
    MethodResult res;
    res.method = m;
    try {
      const TfdGrid g = run_method(x, m, cfg);
      res.meta = g.meta;
      res.resolution = resolution_report(g);
      res.dominant_freq_hz = dominant_frequency(g, cfg.dominant_band_hz);
      if (truth) {
        const auto ridge = extract_ridge(g, cfg.ridge_band_hz, cfg.amp_threshold_frac);
        std::vector<IFTrajectory> on_grid;
        for (const auto& t : *truth) on_grid.push_back(resample_nearest(t, ridge.times_s));
        const auto actual = match_truth(ridge, on_grid, cfg.scoring, cfg.dominant_component);
        res.nrmse = nrmse(actual, ridge);
        std::size_t n = 0;
        for (std::size_t i = 0; i < ridge.size(); ++i) n += (actual.valid[i] && ridge.valid[i]) ? 1 : 0;
        res.scored_frames = n;
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
    report.entries.push_back(std::move(res));
  }
  return report;
}

std::string ComparisonReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json root;
  root["signal_id"] = signal_id;
  root["scoring"] = to_string(scoring);
  ordered_json list = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json j;
    j["method"] = to_string(e.method);
    j["status"] = e.ok ? "ok" : "failed";
    if (!e.ok) {
      j["error"] = e.error;
      list.push_back(j);
      continue;
    }
    if (e.nrmse) {
      j["nrmse"] = *e.nrmse;
      j["scored_frames"] = *e.scored_frames;
    }
    j["dominant_freq_hz"] = e.dominant_freq_hz;
    j["resolution"] = {{"temporal_resolution_ms", e.resolution.temporal_resolution_ms},
                       {"spectral_resolution_hz", e.resolution.spectral_resolution_hz},
                       {"nyquist_hz", e.resolution.nyquist_hz},
                       {"folding_hz", e.resolution.folding_hz}};
    j["fft_length"] = e.meta.fft_length;
    j["hop_samples"] = e.meta.hop_samples;
    if (e.method == TfdMethod::pct) {
      j["kernel_coeffs"] = e.meta.kernel_coeffs;
      j["kernel_iterations"] = e.meta.kernel_iterations;
      j["kernel_converged"] = e.meta.kernel_converged;
    }
    if (!e.meta.warnings.empty()) j["warnings"] = e.meta.warnings;
    list.push_back(j);
  }
  root["methods"] = list;
  return root.dump(2) + "\n";
}

std::string ComparisonReport::to_text() const {
  std::ostringstream os;
  os << "signal: " << (signal_id.empty() ? "-" : signal_id) << "   scoring: " << to_string(scoring) << "\n";
  os << std::left << std::setw(8) << "method" << std::right << std::setw(10) << "NRMSE" << std::setw(14)
     << "dominant Hz" << std::setw(14) << "dt (ms)" << std::setw(14) << "df (Hz)" << "  status\n";
  for (const auto& e : entries) {
    os << std::left << std::setw(8) << to_string(e.method) << std::right;
    if (!e.ok) {
      os << std::setw(10) << "-" << std::setw(14) << "-" << std::setw(14) << "-" << std::setw(14) << "-"
         << "  failed: " << e.error << "\n";
      continue;
    }
    os << std::setw(10) << (e.nrmse ? fmt(*e.nrmse, 4) : "-") << std::setw(14) << fmt(e.dominant_freq_hz, 4)
       << std::setw(14) << fmt(e.resolution.temporal_resolution_ms, 4) << std::setw(14)
       << fmt(e.resolution.spectral_resolution_hz, 4) << "  "
       << (e.meta.kernel_converged ? "ok" : "ok (kernel not converged)") << "\n";
  }
  return os.str();
}

}  // namespace scgtf
