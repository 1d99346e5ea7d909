#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "scgtf/error.hpp"
#include "scgtf/signal.hpp"

using namespace scgtf;

namespace {

SampledSignal tone(double f, double rate, double duration, double phase = 0.0) {
  const auto n = static_cast<std::size_t>(std::llround(rate * duration));
  SampledSignal x{std::vector<double>(n), rate, 0.0};
  for (std::size_t i = 0; i < n; ++i) x.samples[i] = std::cos(oracle::kTwoPi * f * static_cast<double>(i) / rate + phase);
  return x;
}

SampledSignal random_signal(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  SampledSignal x{std::vector<double>(n), 320.0, 0.0};
  for (auto& v : x.samples) v = d(rng);
  return x;
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("window shapes") {
  CHECK(make_window(WindowSpec::rectangular(4)) == std::vector<double>{1, 1, 1, 1});
  const auto h3 = make_window(WindowSpec::hann(3));
  CHECK(h3[0] == 0.0);
  CHECK(h3[1] == 1.0);
  CHECK(h3[2] == doctest::Approx(0.0).epsilon(1e-15));
  const auto h5 = make_window(WindowSpec::hann(5));
  const std::vector<double> expect{0.0, 0.5, 1.0, 0.5, 0.0};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(h5[i] - expect[i]) < 1e-15);
  CHECK_THROWS_AS(make_window(WindowSpec::hann(0)), InvalidArgument);
  CHECK_THROWS_AS(make_window(WindowSpec::gaussian(9, 0.0)), InvalidArgument);
}

TEST_CASE("odd symmetric windows are symmetric, non-negative and peak at 1") {
  for (auto kind : {WindowKind::rectangular, WindowKind::hann, WindowKind::hamming, WindowKind::gaussian}) {
    for (std::size_t n = 1; n <= 65; n += 2) {
      WindowSpec spec{kind, n};
      const auto w = make_window(spec);
      REQUIRE(w.size() == n);
      CHECK(w[n / 2] == 1.0);
      CHECK(*std::max_element(w.begin(), w.end()) == 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(w[i] >= 0.0);
        CHECK(std::abs(w[i] - w[n - 1 - i]) < 1e-14);
      }
    }
  }
}

TEST_CASE("periodic hann drops the closing zero") {
  WindowSpec spec = WindowSpec::hann(4);
  spec.periodic = true;
  const auto w = make_window(spec);
  CHECK(w[0] == 0.0);
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK(w[3] == doctest::Approx(0.5));
}

TEST_CASE("analytic signal of a cosine is the complex exponential") {
  const auto x = tone(20.0, 320.0, 1.0);
  const auto z = analytic_signal(x);
  double err = 0.0;
  const std::size_t edge = x.size() / 20;
  for (std::size_t i = edge; i < x.size() - edge; ++i) {
    const cplx expect = std::polar(1.0, oracle::kTwoPi * 20.0 * x.time_at(i));
    err = std::max(err, std::abs(z.samples[i] - expect));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("Hilbert transform is linear on a two-tone sum") {
  auto x = tone(20.0, 320.0, 1.0);
  const auto y = tone(40.0, 320.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] += y.samples[i];
  const auto z = analytic_signal(x);
  double err = 0.0;
  for (std::size_t i = 16; i < x.size() - 16; ++i) {
    const double t = x.time_at(i);
    const double expect = std::sin(oracle::kTwoPi * 20.0 * t) + std::sin(oracle::kTwoPi * 40.0 * t);
    err = std::max(err, std::abs(z.samples[i].imag() - expect));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("analytic signal of a constant has zero imaginary part") {
  const SampledSignal x{std::vector<double>(100, 1.0), 320.0, 0.0};
  const auto z = analytic_signal(x);
  for (const auto& v : z.samples) CHECK(std::abs(v.imag()) < 1e-12);
}

TEST_CASE("analytic signal: exact real part and suppressed negative frequencies") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 100 + 37 * seed;  // odd and even lengths
    const auto x = random_signal(n, seed);
    const auto z = analytic_signal(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(z.samples[i].real() == x.samples[i]);
    const auto Z = oracle::dft(z.samples, n);
    double peak = 0.0, neg = 0.0;
    for (std::size_t k = 0; k < n; ++k) peak = std::max(peak, std::abs(Z[k]));
    for (std::size_t k = n / 2 + 1; k < n; ++k) neg = std::max(neg, std::abs(Z[k]));
    CHECK(neg < 1e-9 * peak);
  }
  CHECK_THROWS_AS(analytic_signal(SampledSignal{{}, 320.0, 0.0}), InvalidArgument);
}

TEST_CASE("decimation keeps an in-band tone in place") {
  const auto x = tone(20.0, 3200.0, 2.0);
  const auto y = decimate(x, 10);
  CHECK(y.sample_rate_hz == 320.0);
  CHECK(y.size() == 640);
  const auto p = oracle::periodogram(y.samples, 640);  // 0.5 Hz bins
  const auto k = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  CHECK(std::abs(static_cast<double>(k) * 0.5 - 20.0) <= 0.5);
}

TEST_CASE("decimation suppresses a tone above the new Nyquist") {
  const auto x = tone(200.0, 3200.0, 1.0, 0.3);
  const auto y = decimate(x, 10);
  // Mean power before and after, away from the mirrored edges where the
  // reflected tone has a slope discontinuity.
  const double before = mean_power(x.samples);
  const double after = mean_power(std::span<const double>(y.samples).subspan(64, y.size() - 128));
  CHECK(10.0 * std::log10(after / before) < -40.0);
}

TEST_CASE("decimation by one is the identity and bad factors are rejected") {
  const auto x = random_signal(50, 3);
  CHECK(decimate(x, 1).samples == x.samples);
  CHECK_THROWS_AS(decimate(x, 0), InvalidArgument);
  CHECK_THROWS_AS(decimate(x, 50), InvalidArgument);
}

TEST_CASE("decimation composes") {
  auto x = tone(5.0, 1280.0, 2.0);
  const auto y = tone(13.0, 1280.0, 2.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] += 0.5 * y.samples[i];
  const auto once = decimate(x, 4);
  const auto twice = decimate(decimate(x, 2), 2);
  REQUIRE(once.size() == twice.size());
  CHECK(oracle::rel_l2(twice.samples, once.samples) < 0.01);
}

TEST_CASE("decimation filter has unit DC gain and the stated length") {
  const auto h = decimation_filter(10);
  CHECK(h.size() == 641);
  CHECK(std::accumulate(h.begin(), h.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noise at linear SNR 10") {
  const auto base = random_signal(320, 99);
  const double ps = mean_power(base.samples);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto y = add_white_noise(base, 10.0, seed);
    std::vector<double> n(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) n[i] = y.samples[i] - base.samples[i];
    const double ratio = ps / mean_power(n);
    CHECK(ratio >= 8.5);
    CHECK(ratio <= 11.5);
    const double sigma = std::sqrt(ps / 10.0);
    const double mean = std::accumulate(n.begin(), n.end(), 0.0) / static_cast<double>(n.size());
    CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(n.size())));
  }
}

TEST_CASE("noise scaling, determinism and preconditions") {
  const auto base = random_signal(320, 5);
  const double rms = std::sqrt(mean_power(base.samples));
  const auto y = add_white_noise(base, 1e12, 4);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y.samples[i] - base.samples[i]) < 1e-5 * rms);
  CHECK(add_white_noise(base, 10.0, 7).samples == add_white_noise(base, 10.0, 7).samples);
  CHECK(add_white_noise(base, 10.0, 7).samples != add_white_noise(base, 10.0, 8).samples);
  CHECK_THROWS_AS(add_white_noise(base, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(add_white_noise(base, -1.0, 1), InvalidArgument);
  // 10 dB is the same power ratio as linear 10.
  CHECK(add_white_noise(base, 10.0, 3, SnrScale::decibel).samples == add_white_noise(base, 10.0, 3).samples);
}

}  // TEST_SUITE
