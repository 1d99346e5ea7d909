#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scgtf/error.hpp"
#include "scgtf/pct.hpp"
#include "scgtf/reference.hpp"
#include "scgtf/synth.hpp"

using namespace scgtf;

namespace {

// exp(j 2 pi (c0 t + c1 t^2 / 2 + c2 t^3 / 3)), i.e. IF = c0 + c1 t + c2 t^2.
ComplexSignal poly_chirp(double c0, double c1, double c2, double rate = 320.0, std::size_t n = 320) {
  ComplexSignal z{std::vector<cplx>(n), rate, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    z.samples[i] = std::polar(1.0, oracle::kTwoPi * (c0 * t + c1 * t * t / 2.0 + c2 * t * t * t / 3.0));
  }
  return z;
}

// Contiguous bins around the row maximum that stay within 3 dB of it.
std::size_t width_3db(const TfdGrid& g, std::size_t t) {
  const auto row = g.row(t);
  const auto peak = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  const double half = 0.5 * row[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && row[lo - 1] >= half) --lo;
  while (hi + 1 < row.size() && row[hi + 1] >= half) ++hi;
  return hi - lo + 1;
}

double fitted_rms(const KernelEstimate& est, double (*truth)(double), double t_lo, double t_hi) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < est.fitted_if.size(); ++i) {
    const double t = est.fitted_if.times_s[i];
    if (t < t_lo || t > t_hi) continue;
    const double d = est.fitted_if.freqs_hz[i] - truth(t);
    acc += d * d;
    ++n;
  }
  REQUIRE(n > 0);
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

TEST_SUITE("pct") {

TEST_CASE("zero kernel is the spectrogram") {
  const auto z = analytic_signal(gen_x2(320.0, 1.0, 10.0, 4).signal);
  PctConfig cfg;
  for (std::size_t order : {0u, 1u, 2u, 3u}) {
    PolynomialKernel k{std::vector<double>(order, 0.0)};
    const auto p = pct_transform(z, k, cfg);
    const auto s = stft(z, cfg.window, cfg.hop_samples, cfg.fft_length);
    REQUIRE(p.values.size() == s.values.size());
    CHECK(oracle::max_abs_diff(p.values, s.values) <= 1e-12 * oracle::max_abs(s.values));
    CHECK(p.times_s == s.times_s);
    CHECK(p.freqs_hz == s.freqs_hz);
  }
}

TEST_CASE("chirplet transform matches the direct-sum reference") {
  const auto z = poly_chirp(15.0, 40.0, -20.0, 320.0, 160);
  const std::vector<double> alphas{35.0, -12.0};
  PctConfig cfg;
  cfg.window = WindowSpec::hann(33);
  cfg.hop_samples = 7;
  cfg.fft_length = 96;
  const auto fast = pct_transform(z, PolynomialKernel{alphas}, cfg);
  const auto ref = reference::pct(z, alphas, cfg.window, cfg.hop_samples, cfg.fft_length);
  REQUIRE(fast.values.size() == ref.values.size());
  CHECK(oracle::max_abs_diff(fast.values, ref.values) < 1e-9 * oracle::max_abs(ref.values));
}

TEST_CASE("matched kernel concentrates a linear chirp") {
  // Steep enough that the quadratic phase across one window is about pi.
  const auto z = poly_chirp(10.0, 100.0, 0.0);
  PctConfig cfg;
  const auto matched = pct_transform(z, PolynomialKernel{{100.0}}, cfg);
  const auto wrong = pct_transform(z, PolynomialKernel{{-100.0}}, cfg);
  const auto plain = stft(z, cfg.window, cfg.hop_samples, cfg.fft_length);
  const double bin = matched.freqs_hz[1];
  double w_matched = 0.0, w_wrong = 0.0;
  for (std::size_t t = 0; t < matched.n_times(); ++t) {
    const std::size_t wm = width_3db(matched, t);
    CHECK(wm < width_3db(plain, t));
    w_matched += static_cast<double>(wm);
    w_wrong += static_cast<double>(width_3db(wrong, t));
    const auto row = matched.row(t);
    const auto k = std::max_element(row.begin(), row.end()) - row.begin();
    CHECK(std::abs(matched.freqs_hz[static_cast<std::size_t>(k)] - (10.0 + 100.0 * matched.times_s[t])) <= bin);
  }
  CHECK(w_wrong > w_matched);
}

TEST_CASE("kernel estimate of a stationary tone has no slope") {
  PctConfig cfg;
  cfg.order = 1;
  const auto est = estimate_kernel(poly_chirp(40.0, 0.0, 0.0), cfg);
  REQUIRE(est.kernel.order() == 1);
  CHECK(std::abs(est.kernel.coeffs[0]) < 1.0);
  CHECK(est.intercept_hz == doctest::Approx(40.0).epsilon(0.01));
}

TEST_CASE("kernel estimate recovers a linear chirp") {
  const auto est = estimate_kernel(poly_chirp(20.0, 30.0, 0.0), PctConfig{});
  CHECK(est.converged);
  CHECK(est.iterations <= 10);
  CHECK(fitted_rms(est, [](double t) { return 20.0 + 30.0 * t; }, 0.1, 0.9) < 0.5);
  CHECK(std::abs(est.kernel.coeffs[1]) < 5.0);
  CHECK(est.kernel.coeffs[0] == doctest::Approx(30.0).epsilon(0.05));
}

TEST_CASE("kernel estimate recovers the x2 chirp polynomial on a burst") {
  // Complex burst with the chirp's exact phase (first burst only).
  const auto env = burst_envelope(1.0, 0.5, false);
  ComplexSignal z{std::vector<cplx>(320), 320.0, 0.0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double t = z.time_at(i);
    if (t > 0.25 && t <= 0.40) z.samples[i] = envelope_value(env, t) * std::polar(1.0, x2_chirp_phase(t - 0.25));
  }
  PctConfig cfg;
  cfg.window = WindowSpec::hann(32);
  cfg.ridge_band_hz = Band{1.0, 70.0};
  const auto est = estimate_kernel(z, cfg);
  CHECK(fitted_rms(est, [](double t) { return x2_chirp_if(t - 0.25); }, 0.265, 0.375) < 1.0);
}

TEST_CASE("recovered kernels of polynomial-IF signals stay within five tolerances") {
  PctConfig cfg;
  struct Case {
    double c0, c1, c2;
  };
  for (const auto& c : {Case{30.0, 0.0, 0.0}, Case{15.0, 25.0, 0.0}, Case{50.0, -40.0, 20.0}, Case{10.0, 60.0, -30.0}}) {
    const auto est = estimate_kernel(poly_chirp(c.c0, c.c1, c.c2), cfg);
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < est.fitted_if.size(); ++i) {
      const double t = est.fitted_if.times_s[i];
      const double d = est.fitted_if.freqs_hz[i] - (c.c0 + c.c1 * t + c.c2 * t * t);
      acc += d * d;
      ++n;
    }
    CHECK(std::sqrt(acc / static_cast<double>(n)) < 5.0 * cfg.convergence_tol_hz);
  }
}

TEST_CASE("kernel estimation is deterministic and bounded") {
  const auto z = analytic_signal(gen_x2(320.0, 1.0, 10.0, 9).signal);
  PctConfig cfg;
  const auto a = estimate_kernel(z, cfg);
  const auto b = estimate_kernel(z, cfg);
  CHECK(a.kernel.coeffs == b.kernel.coeffs);
  CHECK(a.grid.values == b.grid.values);
  CHECK(a.iterations <= cfg.max_iterations);
  cfg.max_iterations = 1;
  const auto c = estimate_kernel(z, cfg);
  CHECK(c.iterations == 1);
  CHECK_FALSE(c.converged);
  CHECK_FALSE(c.grid.meta.warnings.empty());
}

TEST_CASE("pct error handling") {
  const auto z = poly_chirp(20.0, 0.0, 0.0);
  CHECK_THROWS_AS(pct_transform(z, PolynomialKernel{{std::nan("")}}, PctConfig{}),
                  InvalidArgument);
  CHECK_THROWS_AS(pct_transform(z, PolynomialKernel{{INFINITY}}, PctConfig{}), InvalidArgument);
  const SampledSignal silent{std::vector<double>(320, 0.0), 320.0, 0.0};
  CHECK_THROWS_AS(pct_auto(silent), InsufficientData);
  PctConfig bad;
  bad.order = 0;
  CHECK_THROWS_AS(estimate_kernel(z, bad), InvalidArgument);
  bad = PctConfig{};
  bad.convergence_tol_hz = 0.0;
  CHECK_THROWS_AS(estimate_kernel(z, bad), InvalidArgument);
}

TEST_CASE("pct of x1 shows only the two tones") {
  const auto g = pct_auto(gen_x1().signal);
  CHECK(g.method == TfdMethod::pct);
  CHECK(g.meta.kernel_coeffs.size() == 2);
  const auto psd = psd_from_tfd(g);
  const auto peaks = psd_peaks(psd, -20.0);
  CHECK(psd_peaks(psd, -20.0, Band{25.0, 35.0}).empty());
  CHECK(std::any_of(peaks.begin(), peaks.end(), [](double f) { return std::abs(f - 20.0) <= 1.0; }));
  CHECK(std::any_of(peaks.begin(), peaks.end(), [](double f) { return std::abs(f - 40.0) <= 1.0; }));
}

}  // TEST_SUITE
