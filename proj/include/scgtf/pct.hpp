#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scgtf/if_trajectory.hpp"
#include "scgtf/signal.hpp"
#include "scgtf/tfd.hpp"

namespace scgtf {

// IF(t) ~ a0 + coeffs[0] t + coeffs[1] t^2 + ...; a0 is carried by the
// frequency axis. coeffs[k-1] is alpha_k in Hz/s^k, t in absolute seconds.
struct PolynomialKernel {
  std::vector<double> coeffs;

  std::size_t order() const { return coeffs.size(); }
  bool is_finite() const;
  // sum_k alpha_k t^k (no constant term).
  double trend_hz(double t) const;
};

struct PctConfig {
  int order{2};
  int max_iterations{10};
  std::optional<Band> ridge_band_hz{Band{5.0, 70.0}};
  double convergence_tol_hz{0.1};
  WindowSpec window{WindowSpec::hann(64)};
  std::size_t hop_samples{1};
  std::size_t fft_length{1300};
  // Ridge points whose amplitude is below this fraction of the largest ridge
  // amplitude are left out of the fit.
  double amp_threshold_frac{0.05};

  void validate() const;
};

// Chirplet spectrogram: z is rotated by exp(-j 2 pi sum_k alpha_k t^(k+1)/(k+1))
// and each frame centered at t0 is shifted by exp(+j 2 pi sum_k alpha_k t0^k t)
// before the windowed DFT. Grid conventions match stft().
TfdGrid pct_transform(const ComplexSignal& z, const PolynomialKernel& kernel, const PctConfig& cfg);

struct KernelEstimate {
  PolynomialKernel kernel;
  double intercept_hz{0.0};
  TfdGrid grid;           // transform under the returned kernel
  IFTrajectory fitted_if;  // fitted polynomial on the grid times; valid = frames used in the fit
  int iterations{0};
  bool converged{false};
};

// Alternates transform, ridge pick and weighted polynomial fit, starting from
// the zero kernel, until the fitted IF moves by less than the tolerance on
// every fitted frame. Throws InsufficientData when fewer than order + 1 frames
// clear the amplitude threshold. Non-convergence is reported, not thrown.
KernelEstimate estimate_kernel(const ComplexSignal& z, const PctConfig& cfg);

// analytic_signal -> estimate_kernel; kernel and iteration status go to meta.
TfdGrid pct_auto(const SampledSignal& x, const PctConfig& cfg = {});

}  // namespace scgtf
