#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "scgtf/error.hpp"
#include "scgtf/io.hpp"

namespace scgtf {

namespace {

nlohmann::ordered_json window_json(const WindowSpec& w) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(w.kind);
  j["length_samples"] = w.length_samples;
  if (w.kind == WindowKind::gaussian) j["gaussian_alpha"] = w.gaussian_alpha;
  j["periodic"] = w.periodic;
  return j;
}

}  // namespace

std::string grid_csv(const TfdGrid& g) {
  if (g.empty()) throw InvalidArgument("empty grid");
  std::string out = "time_s\\freq_hz";
  char buf[64];
  for (double f : g.freqs_hz) {
    std::snprintf(buf, sizeof buf, ",%.12g", f);
    out += buf;
  }
  out += '\n';
  for (std::size_t t = 0; t < g.n_times(); ++t) {
    std::snprintf(buf, sizeof buf, "%.12g", g.times_s[t]);
    out += buf;
    for (double v : g.row(t)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Heatmap render_heatmap(const TfdGrid& g, HeatmapScale scale) {
  if (g.empty()) throw InvalidArgument("empty grid");
  constexpr double kFloorDb = -60.0;
  const bool signed_scale = is_wigner_family(g.method);
  double top = 0.0;
  for (double v : g.values) top = std::max(top, std::abs(v));

  // Maps a value to [0, 1] for unsigned grids or [-1, 1] for signed ones.
  const auto level = [&](double v) {
    if (!(top > 0.0)) return 0.0;
    const double mag = std::abs(v) / top;
    double l = mag;
    if (scale == HeatmapScale::decibel) {
      const double db = mag > 0.0 ? std::max(kFloorDb, 10.0 * std::log10(mag)) : kFloorDb;
      l = (db - kFloorDb) / -kFloorDb;
    }
    return v < 0.0 ? -l : l;
  };

  Heatmap h;
  h.mapping = std::string(signed_scale ? "signed-" : "") +
              (scale == HeatmapScale::decibel ? "db(-60)" : "linear");
  const std::string header = "P5\n" + std::to_string(g.n_times()) + " " + std::to_string(g.n_freqs()) + "\n255\n";
  h.pgm.assign(header.begin(), header.end());
  for (std::size_t f = g.n_freqs(); f-- > 0;) {
    for (std::size_t t = 0; t < g.n_times(); ++t) {
      const double l = level(g.at(t, f));
      const double gray = signed_scale ? 127.5 * (1.0 + l) : 255.0 * l;
      h.pgm.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(gray), 0L, 255L)));
    }
  }
  return h;
}

std::string grid_meta_json(const TfdGrid& g, const std::string& heatmap_mapping) {
  nlohmann::ordered_json j;
  const auto& m = g.meta;
  j["method"] = to_string(g.method);
  j["sample_rate_hz"] = g.sample_rate_hz;
  j["n_times"] = g.n_times();
  j["n_freqs"] = g.n_freqs();
  j["fft_length"] = m.fft_length;
  j["hop_samples"] = m.hop_samples;
  if (m.window) j["window"] = window_json(*m.window);
  if (m.time_window) j["time_window"] = window_json(*m.time_window);
  if (m.lag_window) j["lag_window"] = window_json(*m.lag_window);
  if (is_wigner_family(g.method)) {
    j["analytic_input"] = m.analytic_input;
    j["imag_residue"] = m.imag_residue;
  }
  if (g.method == TfdMethod::pct) {
    j["kernel_coeffs"] = m.kernel_coeffs;
    j["kernel_iterations"] = m.kernel_iterations;
    j["kernel_converged"] = m.kernel_converged;
  }
  j["decimation_factor"] = m.decimation_factor;
  if (g.n_times() >= 2 && g.n_freqs() >= 2) {
    const auto r = resolution_report(g);
    j["resolution"] = {{"temporal_resolution_ms", r.temporal_resolution_ms},
                       {"spectral_resolution_hz", r.spectral_resolution_hz},
                       {"nyquist_hz", r.nyquist_hz},
                       {"folding_hz", r.folding_hz}};
  }
  if (!heatmap_mapping.empty()) j["heatmap"] = heatmap_mapping;
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

}  // namespace scgtf
