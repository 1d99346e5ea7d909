#include "scgtf/pct.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scgtf/error.hpp"
#include "tfd_kernels.hpp"

namespace scgtf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Ridge {
  std::vector<double> freq;
  std::vector<double> amp;
};

Ridge pick_ridge(const TfdGrid& g, const std::optional<Band>& band) {
  std::size_t lo = 0;
  std::size_t hi = g.n_freqs();
  if (band) {
    lo = static_cast<std::size_t>(
        std::lower_bound(g.freqs_hz.begin(), g.freqs_hz.end(), band->first) - g.freqs_hz.begin());
    hi = static_cast<std::size_t>(
        std::upper_bound(g.freqs_hz.begin(), g.freqs_hz.end(), band->second) - g.freqs_hz.begin());
  }
  if (lo >= hi) throw InvalidArgument("ridge band contains no frequency bins");
  Ridge r;
  r.freq.resize(g.n_times());
  r.amp.resize(g.n_times());
  for (std::size_t t = 0; t < g.n_times(); ++t) {
    const auto row = g.row(t);
    const auto it = std::max_element(row.begin() + static_cast<std::ptrdiff_t>(lo),
                                     row.begin() + static_cast<std::ptrdiff_t>(hi));
    r.freq[t] = g.freqs_hz[static_cast<std::size_t>(it - row.begin())];
    r.amp[t] = std::sqrt(*it);
  }
  return r;
}

double poly_eval(double c0, const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc + *it) * t;
  return c0 + acc;
}

}  // namespace

bool PolynomialKernel::is_finite() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return std::isfinite(c); });
}

double PolynomialKernel::trend_hz(double t) const { return poly_eval(0.0, coeffs, t); }

void PctConfig::validate() const {
  if (order < 1) throw InvalidArgument("pct order must be >= 1");
  if (max_iterations < 1) throw InvalidArgument("pct max_iterations must be >= 1");
  if (!(convergence_tol_hz > 0.0)) throw InvalidArgument("pct convergence_tol_hz must be > 0");
  if (hop_samples < 1) throw InvalidArgument("pct hop must be >= 1");
  if (window.length_samples > fft_length) throw InvalidArgument("pct window longer than FFT length");
  if (!(amp_threshold_frac >= 0.0 && amp_threshold_frac < 1.0)) {
    throw InvalidArgument("pct amp_threshold_frac must be in [0, 1)");
  }
  if (ridge_band_hz && !(ridge_band_hz->first < ridge_band_hz->second)) {
    throw InvalidArgument("pct ridge band must satisfy low < high");
  }
}

TfdGrid pct_transform(const ComplexSignal& z, const PolynomialKernel& kernel, const PctConfig& cfg) {
  if (!kernel.is_finite()) throw InvalidArgument("pct kernel has non-finite coefficients");
  z.validate();
  if (cfg.window.length_samples > z.size()) throw InvalidArgument("window longer than signal");

  detail::FramePremultiplier premul;
  std::vector<cplx> rotation;
  if (!kernel.coeffs.empty()) {
    rotation.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double t = z.time_at(i);
      double integral = 0.0;
      double power = t;
      for (std::size_t k = 0; k < kernel.coeffs.size(); ++k) {
        power *= t;
        integral += kernel.coeffs[k] * power / static_cast<double>(k + 2);
      }
      rotation[i] = std::polar(1.0, -kTwoPi * integral);
    }
    const std::size_t len = cfg.window.length_samples;
    premul = [&](std::size_t frame, std::size_t first, std::span<cplx> seg) {
      const double t0 = detail::frame_center_s(z, frame, cfg.hop_samples, len);
      const double shift = kernel.trend_hz(t0);
      for (std::size_t i = 0; i < seg.size(); ++i) {
        const double t = z.time_at(first + i);
        seg[i] *= rotation[first + i] * std::polar(1.0, kTwoPi * shift * t);
      }
    };
  }
  auto g = detail::windowed_dft(z, cfg.window, cfg.hop_samples, cfg.fft_length, TfdMethod::pct, premul);
  g.meta.kernel_coeffs = kernel.coeffs;
  return g;
}

KernelEstimate estimate_kernel(const ComplexSignal& z, const PctConfig& cfg) {
  cfg.validate();
  const auto order = static_cast<std::size_t>(cfg.order);

  KernelEstimate est;
  est.kernel.coeffs.assign(order, 0.0);
  std::vector<double> previous_fit;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const TfdGrid g = pct_transform(z, est.kernel, cfg);
    const Ridge ridge = pick_ridge(g, cfg.ridge_band_hz);
    const double top = *std::max_element(ridge.amp.begin(), ridge.amp.end());

    std::vector<std::size_t> used;
    if (top > 0.0) {
      for (std::size_t t = 0; t < ridge.amp.size(); ++t) {
        if (ridge.amp[t] >= cfg.amp_threshold_frac * top) used.push_back(t);
      }
    }
    if (used.size() < order + 1) {
      throw InsufficientData("only " + std::to_string(used.size()) +
                             " ridge frames above threshold; need " + std::to_string(order + 1));
    }

    // Weighted least squares with weight = ridge amplitude on each squared residual.
    Eigen::MatrixXd a(static_cast<Eigen::Index>(used.size()), static_cast<Eigen::Index>(order + 1));
    Eigen::VectorXd b(static_cast<Eigen::Index>(used.size()));
    for (std::size_t r = 0; r < used.size(); ++r) {
      const double t = g.times_s[used[r]];
      const double sw = std::sqrt(ridge.amp[used[r]]);
      double p = 1.0;
      for (std::size_t c = 0; c <= order; ++c) {
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sw * p;
        p *= t;
      }
      b(static_cast<Eigen::Index>(r)) = sw * ridge.freq[used[r]];
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);

    PolynomialKernel next;
    next.coeffs.resize(order);
    for (std::size_t k = 0; k < order; ++k) next.coeffs[k] = sol(static_cast<Eigen::Index>(k + 1));
    if (!next.is_finite() || !std::isfinite(sol(0))) break;

    std::vector<double> fit(g.n_times());
    for (std::size_t t = 0; t < fit.size(); ++t) fit[t] = poly_eval(sol(0), next.coeffs, g.times_s[t]);

    bool settled = false;
    if (!previous_fit.empty()) {
      double change = 0.0;
      for (auto t : used) change = std::max(change, std::abs(fit[t] - previous_fit[t]));
      settled = change < cfg.convergence_tol_hz;
    }

    est.kernel = next;
    est.intercept_hz = sol(0);
    est.iterations = iter;
    est.fitted_if.times_s = g.times_s;
    est.fitted_if.freqs_hz = fit;
    est.fitted_if.valid.assign(g.n_times(), false);
    for (auto t : used) est.fitted_if.valid[t] = true;
    previous_fit = std::move(fit);
    if (settled) {
      est.converged = true;
      break;
    }
  }

  est.grid = pct_transform(z, est.kernel, cfg);
  est.grid.meta.kernel_iterations = est.iterations;
  est.grid.meta.kernel_converged = est.converged;
  if (!est.converged) {
    est.grid.meta.warnings.push_back("pct kernel did not converge within " +
                                     std::to_string(cfg.max_iterations) + " iterations");
  }
  return est;
}

TfdGrid pct_auto(const SampledSignal& x, const PctConfig& cfg) {
  x.validate();
  auto est = estimate_kernel(analytic_signal(x), cfg);
  est.grid.meta.analytic_input = true;
  return std::move(est.grid);
}

}  // namespace scgtf
