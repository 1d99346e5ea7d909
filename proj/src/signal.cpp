#include "scgtf/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "scgtf/error.hpp"
#include "scgtf/fft.hpp"

namespace scgtf {

namespace {

void validate_grid(double rate, std::size_t n, bool require_samples) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("sample rate must be positive");
  if (require_samples && n == 0) throw InvalidArgument("signal is empty");
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Index into [0, n) by mirroring about the end samples (edge sample not repeated).
std::size_t mirror_index(std::ptrdiff_t j, std::size_t n) {
  if (n == 1) return 0;
  const auto last = static_cast<std::ptrdiff_t>(n - 1);
  const std::ptrdiff_t period = 2 * last;
  j %= period;
  if (j < 0) j += period;
  if (j > last) j = period - j;
  return static_cast<std::size_t>(j);
}

// Centered ("same") FIR filtering with mirrored edges; h must have odd length.
std::vector<double> filter_centered(const std::vector<double>& x, const std::vector<double>& h) {
  const std::size_t n = x.size();
  const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
  std::vector<double> y(n, 0.0);
#pragma omp parallel for schedule(static) if (n * h.size() > 200000)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      acc += h[static_cast<std::size_t>(k + half)] * x[mirror_index(i - k, n)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

}  // namespace

void SampledSignal::validate(bool require_samples) const {
  validate_grid(sample_rate_hz, samples.size(), require_samples);
}

void ComplexSignal::validate(bool require_samples) const {
  validate_grid(sample_rate_hz, samples.size(), require_samples);
}

ComplexSignal ComplexSignal::from_real(const SampledSignal& x) {
  ComplexSignal z{{}, x.sample_rate_hz, x.start_time_s};
  z.samples.assign(x.samples.begin(), x.samples.end());
  return z;
}

const char* to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::hann: return "hann";
    case WindowKind::hamming: return "hamming";
    case WindowKind::gaussian: return "gaussian";
  }
  return "unknown";
}

WindowKind window_kind_from_string(const std::string& name) {
  if (name == "rectangular" || name == "rect") return WindowKind::rectangular;
  if (name == "hann" || name == "hanning") return WindowKind::hann;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "gaussian" || name == "gauss") return WindowKind::gaussian;
  throw InvalidArgument("unknown window kind '" + name + "'");
}

std::vector<double> make_window(const WindowSpec& spec) {
  const std::size_t n = spec.length_samples;
  if (n == 0) throw InvalidArgument("window length must be >= 1");
  if (spec.kind == WindowKind::gaussian && !(spec.gaussian_alpha > 0.0)) {
    throw InvalidArgument("gaussian alpha must be positive");
  }
  std::vector<double> w(n, 1.0);
  if (n == 1 || spec.kind == WindowKind::rectangular) return w;

  const double denom = spec.periodic ? static_cast<double>(n) : static_cast<double>(n - 1);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    switch (spec.kind) {
      case WindowKind::hann: w[k] = 0.5 - 0.5 * std::cos(two_pi * kk / denom); break;
      case WindowKind::hamming: w[k] = 0.54 - 0.46 * std::cos(two_pi * kk / denom); break;
      case WindowKind::gaussian: {
        const double c = denom / 2.0;
        const double u = spec.gaussian_alpha * (kk - c) / c;
        w[k] = std::exp(-0.5 * u * u);
        break;
      }
      case WindowKind::rectangular: break;
    }
  }
  // Pin the exact center so symmetric odd windows peak at precisely 1.
  if (!spec.periodic && n % 2 == 1) w[n / 2] = 1.0;
  return w;
}

ComplexSignal analytic_signal(const SampledSignal& x) {
  x.validate();
  const std::size_t n = x.size();
  ComplexSignal z{std::vector<cplx>(n), x.sample_rate_hz, x.start_time_s};
  if (n == 1) {
    z.samples[0] = {x.samples[0], 0.0};
    return z;
  }

  Fft fwd(n, Fft::Direction::forward);
  Fft inv(n, Fft::Direction::inverse);
  auto buf = fwd.buffer();
  for (std::size_t i = 0; i < n; ++i) buf[i] = {x.samples[i], 0.0};
  fwd.execute();

  // Keep DC (and Nyquist for even n), double the positive bins, zero the rest.
  auto spec = inv.buffer();
  std::fill(spec.begin(), spec.end(), cplx{});
  spec[0] = buf[0];
  const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) spec[k] = 2.0 * buf[k];
  if (n % 2 == 0) spec[n / 2] = buf[n / 2];
  inv.execute();

  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    z.samples[i] = {x.samples[i], spec[i].imag() * scale};
  }
  return z;
}

std::vector<double> decimation_filter(int factor) {
  if (factor < 1) throw InvalidArgument("decimation factor must be >= 1");
  const std::size_t taps = 64 * static_cast<std::size_t>(factor) + 1;
  // Cutoff as a fraction of the input sample rate.
  const double cutoff = 0.8 * 0.5 / static_cast<double>(factor);
  const auto win = make_window(WindowSpec::hamming(taps));
  const double center = static_cast<double>(taps - 1) / 2.0;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double m = static_cast<double>(i) - center;
    h[i] = 2.0 * cutoff * sinc(2.0 * cutoff * m) * win[i];
    sum += h[i];
  }
  for (auto& v : h) v /= sum;
  return h;
}

SampledSignal decimate(const SampledSignal& x, int factor) {
  if (factor < 1) throw InvalidArgument("decimation factor must be >= 1");
  x.validate();
  if (factor == 1) return x;
  const auto f = static_cast<std::size_t>(factor);
  const std::size_t out_len = (x.size() + f - 1) / f;
  if (out_len < 2) throw InvalidArgument("decimation leaves fewer than 2 samples");

  const auto h = decimation_filter(factor);
  // h is symmetric, so the backward pass is the same centered filter.
  const auto once = filter_centered(x.samples, h);
  const auto twice = filter_centered(once, h);

  SampledSignal y{std::vector<double>(out_len), x.sample_rate_hz / static_cast<double>(factor),
                  x.start_time_s};
  for (std::size_t i = 0; i < out_len; ++i) y.samples[i] = twice[i * f];
  return y;
}

double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

SampledSignal add_white_noise(const SampledSignal& x, double snr, std::uint64_t seed, SnrScale scale) {
  x.validate();
  if (!std::isfinite(snr)) throw InvalidArgument("snr must be finite");
  double ratio = snr;
  if (scale == SnrScale::decibel) {
    ratio = std::pow(10.0, snr / 10.0);
  } else if (!(snr > 0.0)) {
    throw InvalidArgument("snr must be positive");
  }

  const double sigma = std::sqrt(mean_power(x.samples) / ratio);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SampledSignal y = x;
  for (auto& v : y.samples) v += sigma * normal(rng);
  return y;
}

}  // namespace scgtf
