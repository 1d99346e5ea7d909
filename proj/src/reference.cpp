#include "scgtf/reference.hpp"

#include <cmath>
#include <numbers>

#include "scgtf/error.hpp"

namespace scgtf::reference {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx twiddle(std::size_t k, std::ptrdiff_t m, std::size_t nfft) {
  // exp(-j 2 pi k m / nfft) with the product reduced mod nfft first.
  const auto nf = static_cast<long long>(nfft);
  long long km = (static_cast<long long>(k) * static_cast<long long>(m)) % nf;
  if (km < 0) km += nf;
  return std::polar(1.0, -kTwoPi * static_cast<double>(km) / static_cast<double>(nfft));
}

TfdGrid framed(const ComplexSignal& z, std::span<const double> alphas, const WindowSpec& window,
               std::size_t hop, std::size_t nfft, TfdMethod method) {
  const std::size_t n = z.size();
  const std::size_t len = window.length_samples;
  if (hop == 0 || len > nfft || len > n) throw InvalidArgument("bad framing parameters");
  const auto w = make_window(window);
  const std::size_t frames = (n - len) / hop + 1;
  const std::size_t bins = nfft / 2 + 1;

  TfdGrid g;
  g.method = method;
  g.sample_rate_hz = z.sample_rate_hz;
  g.meta.fft_length = nfft;
  g.meta.hop_samples = hop;
  g.meta.window = window;
  for (std::size_t b = 0; b < bins; ++b) {
    g.freqs_hz.push_back(static_cast<double>(b) * z.sample_rate_hz / static_cast<double>(nfft));
  }
  for (std::size_t k = 0; k < frames; ++k) {
    const double t0 = z.start_time_s +
                      (static_cast<double>(k * hop) + (static_cast<double>(len) - 1.0) / 2.0) /
                          z.sample_rate_hz;
    g.times_s.push_back(t0);
    for (std::size_t b = 0; b < bins; ++b) {
      cplx acc{};
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t idx = k * hop + i;
        const double t = z.time_at(idx);
        // Rotation removes the kernel trend; shift restores the local kernel IF at t0.
        double phase = 0.0;
        double power_t = t;
        double power_t0 = 1.0;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          power_t *= t;
          power_t0 *= t0;
          phase += -alphas[a] * power_t / static_cast<double>(a + 2) + alphas[a] * power_t0 * t;
        }
        acc += z.samples[idx] * w[i] * std::polar(1.0, kTwoPi * phase) *
               twiddle(b, static_cast<std::ptrdiff_t>(i), nfft);
      }
      g.values.push_back(std::norm(acc));
    }
  }
  return g;
}

}  // namespace

TfdGrid stft(const ComplexSignal& z, const WindowSpec& window, std::size_t hop, std::size_t nfft) {
  return framed(z, {}, window, hop, nfft, TfdMethod::stft);
}

TfdGrid pct(const ComplexSignal& z, std::span<const double> alphas, const WindowSpec& window,
            std::size_t hop, std::size_t nfft) {
  auto g = framed(z, alphas, window, hop, nfft, TfdMethod::pct);
  g.meta.kernel_coeffs.assign(alphas.begin(), alphas.end());
  return g;
}

TfdGrid wigner(const ComplexSignal& z, std::span<const double> time_window,
               std::span<const double> lag_window, std::size_t nfft) {
  const auto n = static_cast<std::ptrdiff_t>(z.size());
  const auto lg = static_cast<std::ptrdiff_t>(time_window.size() / 2);
  const auto lh = static_cast<std::ptrdiff_t>(lag_window.size() / 2);
  std::ptrdiff_t max_lag = (static_cast<std::ptrdiff_t>(nfft) - 1) / 2;
  if (!lag_window.empty()) max_lag = std::min(max_lag, lh);

  TfdGrid g;
  g.method = time_window.empty() ? (lag_window.empty() ? TfdMethod::wvd : TfdMethod::pwvd)
                                 : TfdMethod::spwvd;
  g.sample_rate_hz = z.sample_rate_hz;
  g.meta.fft_length = nfft;
  for (std::size_t k = 0; k < nfft; ++k) {
    g.freqs_hz.push_back(static_cast<double>(k) * z.sample_rate_hz / (2.0 * static_cast<double>(nfft)));
  }
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    g.times_s.push_back(z.time_at(static_cast<std::size_t>(t)));
    // Local autocorrelation r(m) for m in [-max_lag, max_lag].
    std::vector<cplx> r(static_cast<std::size_t>(2 * max_lag + 1));
    for (std::ptrdiff_t m = -max_lag; m <= max_lag; ++m) {
      cplx acc{};
      double norm = 0.0;
      const std::ptrdiff_t p_span = time_window.empty() ? 0 : lg;
      for (std::ptrdiff_t p = -p_span; p <= p_span; ++p) {
        const std::ptrdiff_t a = t + p + m;
        const std::ptrdiff_t b = t + p - m;
        if (a < 0 || a >= n || b < 0 || b >= n) continue;
        const double gw = time_window.empty() ? 1.0 : time_window[static_cast<std::size_t>(p + lg)];
        acc += gw * z.samples[static_cast<std::size_t>(a)] * std::conj(z.samples[static_cast<std::size_t>(b)]);
        norm += gw;
      }
      if (norm <= 0.0) continue;
      const double hw = lag_window.empty() ? 1.0 : lag_window[static_cast<std::size_t>(m + lh)];
      r[static_cast<std::size_t>(m + max_lag)] = hw * acc / norm;
    }
    for (std::size_t k = 0; k < nfft; ++k) {
      cplx acc{};
      for (std::ptrdiff_t m = -max_lag; m <= max_lag; ++m) {
        acc += r[static_cast<std::size_t>(m + max_lag)] * twiddle(k, m, nfft);
      }
      g.values.push_back(acc.real());
    }
  }
  return g;
}

}  // namespace scgtf::reference
