#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace scgtf {

using cplx = std::complex<double>;

// Uniformly sampled real time series. Sample i sits at
// start_time_s + i / sample_rate_hz.
struct SampledSignal {
  std::vector<double> samples;
  double sample_rate_hz{0.0};
  double start_time_s{0.0};

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t i) const {
    return start_time_s + static_cast<double>(i) / sample_rate_hz;
  }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

  // Throws InvalidArgument unless rate > 0 and (optionally) samples non-empty.
  void validate(bool require_samples = true) const;
};

// Analytic (or any complex) signal on the same uniform grid contract.
struct ComplexSignal {
  std::vector<cplx> samples;
  double sample_rate_hz{0.0};
  double start_time_s{0.0};

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t i) const {
    return start_time_s + static_cast<double>(i) / sample_rate_hz;
  }

  void validate(bool require_samples = true) const;

  // Complex view of a real signal (imaginary part zero).
  static ComplexSignal from_real(const SampledSignal& x);
};

enum class WindowKind { rectangular, hann, hamming, gaussian };

struct WindowSpec {
  WindowKind kind{WindowKind::hann};
  std::size_t length_samples{1};
  // Gaussian only: w[k] = exp(-0.5 * (alpha * (k - c) / c)^2), c = (L-1)/2.
  double gaussian_alpha{2.5};
  // Periodic (DFT-even) variant; the default symmetric form peaks at exactly 1
  // on the center sample for odd lengths.
  bool periodic{false};

  static WindowSpec rectangular(std::size_t n) { return {WindowKind::rectangular, n}; }
  static WindowSpec hann(std::size_t n) { return {WindowKind::hann, n}; }
  static WindowSpec hamming(std::size_t n) { return {WindowKind::hamming, n}; }
  static WindowSpec gaussian(std::size_t n, double alpha) {
    return {WindowKind::gaussian, n, alpha};
  }

  bool operator==(const WindowSpec&) const = default;
};

const char* to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

std::vector<double> make_window(const WindowSpec& spec);

// Analytic associate x + jH[x] via the FFT method. The real part is the input,
// bit for bit.
ComplexSignal analytic_signal(const SampledSignal& x);

// Zero-phase anti-aliased downsampling by an integer factor. The low-pass is a
// Hamming-windowed sinc with 64 * factor + 1 taps and a cutoff at 0.8 of the
// output Nyquist, applied forward and backward with mirrored edges.
SampledSignal decimate(const SampledSignal& x, int factor);

// Low-pass taps used by decimate(); exposed for inspection and tests.
std::vector<double> decimation_filter(int factor);

enum class SnrScale { linear, decibel };

// x + n with n ~ N(0, sigma^2), sigma^2 = mean(x^2) / snr. Deterministic in seed.
SampledSignal add_white_noise(const SampledSignal& x, double snr, std::uint64_t seed,
                              SnrScale scale = SnrScale::linear);

double mean_power(std::span<const double> x);

}  // namespace scgtf
