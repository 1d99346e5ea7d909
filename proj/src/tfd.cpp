#include "scgtf/tfd.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "scgtf/error.hpp"
#include "scgtf/fft.hpp"
#include "tfd_kernels.hpp"

namespace scgtf {

const char* to_string(TfdMethod m) {
  switch (m) {
    case TfdMethod::stft: return "stft";
    case TfdMethod::wvd: return "wvd";
    case TfdMethod::pwvd: return "pwvd";
    case TfdMethod::spwvd: return "spwvd";
    case TfdMethod::pct: return "pct";
  }
  return "unknown";
}

TfdMethod tfd_method_from_string(const std::string& name) {
  if (name == "stft") return TfdMethod::stft;
  if (name == "wvd") return TfdMethod::wvd;
  if (name == "pwvd") return TfdMethod::pwvd;
  if (name == "spwvd") return TfdMethod::spwvd;
  if (name == "pct") return TfdMethod::pct;
  throw InvalidArgument("unknown method '" + name + "' (expected stft, wvd, pwvd, spwvd or pct)");
}

std::size_t wigner_fft_length(std::size_t requested, std::size_t n, double rate, double spacing) {
  if (requested > 0) return requested;
  if (!(spacing > 0.0)) throw InvalidArgument("max_bin_spacing_hz must be positive");
  const auto by_spacing = static_cast<std::size_t>(std::ceil(rate / (2.0 * spacing) - 1e-9));
  return std::max(2 * n, by_spacing);
}

namespace detail {

TfdGrid windowed_dft(const ComplexSignal& z, const WindowSpec& window, std::size_t hop,
                     std::size_t nfft, TfdMethod method, const FramePremultiplier& premultiply) {
  z.validate();
  const std::size_t n = z.size();
  const std::size_t len = window.length_samples;
  if (hop == 0) throw InvalidArgument("hop must be >= 1");
  if (len > nfft) throw InvalidArgument("window longer than FFT length");
  if (len > n) throw InvalidArgument("window longer than signal");
  const auto w = make_window(window);

  const std::size_t frames = (n - len) / hop + 1;
  const std::size_t bins = nfft / 2 + 1;

  TfdGrid g;
  g.method = method;
  g.sample_rate_hz = z.sample_rate_hz;
  g.times_s.resize(frames);
  g.freqs_hz.resize(bins);
  g.values.assign(frames * bins, 0.0);
  for (std::size_t k = 0; k < frames; ++k) g.times_s[k] = frame_center_s(z, k, hop, len);
  for (std::size_t b = 0; b < bins; ++b) {
    g.freqs_hz[b] = static_cast<double>(b) * z.sample_rate_hz / static_cast<double>(nfft);
  }
  g.meta.fft_length = nfft;
  g.meta.hop_samples = hop;
  g.meta.window = window;

#pragma omp parallel
  {
    Fft fft(nfft);
    std::vector<cplx> seg(len);
#pragma omp for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(frames); ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      const std::size_t first = k * hop;
      std::copy_n(z.samples.begin() + static_cast<std::ptrdiff_t>(first), len, seg.begin());
      if (premultiply) premultiply(k, first, seg);
      auto buf = fft.buffer();
      for (std::size_t i = 0; i < len; ++i) buf[i] = seg[i] * w[i];
      std::fill(buf.begin() + static_cast<std::ptrdiff_t>(len), buf.end(), cplx{});
      fft.execute();
      double* out = g.values.data() + k * bins;
      for (std::size_t b = 0; b < bins; ++b) out[b] = std::norm(buf[b]);
    }
  }
  return g;
}

TfdGrid wigner(const ComplexSignal& z, std::span<const double> time_window,
               std::span<const double> lag_window, std::size_t nfft, TfdMethod method) {
  z.validate();
  const std::size_t n = z.size();
  if (nfft < 2) throw InvalidArgument("fft length must be >= 2");
  const bool smooth = !time_window.empty();
  const bool taper = !lag_window.empty();
  if (smooth && time_window.size() % 2 == 0) throw InvalidArgument("time window length must be odd");
  if (taper && lag_window.size() % 2 == 0) throw InvalidArgument("lag window length must be odd");
  const auto half_g = static_cast<std::ptrdiff_t>(time_window.size() / 2);
  const auto half_h = static_cast<std::ptrdiff_t>(lag_window.size() / 2);
  const auto sn = static_cast<std::ptrdiff_t>(n);

  std::ptrdiff_t tau_cap = static_cast<std::ptrdiff_t>(nfft / 2) - 1;
  if (nfft % 2 == 1) tau_cap = static_cast<std::ptrdiff_t>(nfft / 2);
  tau_cap = std::min(tau_cap, sn - 1);
  if (taper) tau_cap = std::min(tau_cap, half_h);

  TfdGrid g;
  g.method = method;
  g.sample_rate_hz = z.sample_rate_hz;
  g.times_s.resize(n);
  g.freqs_hz.resize(nfft);
  g.values.assign(n * nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) g.times_s[i] = z.time_at(i);
  for (std::size_t k = 0; k < nfft; ++k) {
    g.freqs_hz[k] = static_cast<double>(k) * z.sample_rate_hz / (2.0 * static_cast<double>(nfft));
  }
  g.meta.fft_length = nfft;
  g.meta.hop_samples = 1;

  double max_imag = 0.0;
  double max_real = 0.0;
#pragma omp parallel reduction(max : max_imag, max_real)
  {
    Fft fft(nfft);
#pragma omp for schedule(static)
    for (std::ptrdiff_t t = 0; t < sn; ++t) {
      auto r = fft.buffer();
      std::fill(r.begin(), r.end(), cplx{});
      for (std::ptrdiff_t tau = 0; tau <= tau_cap; ++tau) {
        cplx acc{};
        if (!smooth) {
          if (t - tau < 0 || t + tau >= sn) break;
          acc = z.samples[static_cast<std::size_t>(t + tau)] *
                std::conj(z.samples[static_cast<std::size_t>(t - tau)]);
        } else {
          const std::ptrdiff_t p_lo = std::max(-half_g, tau - t);
          const std::ptrdiff_t p_hi = std::min(half_g, sn - 1 - t - tau);
          if (p_lo > p_hi) break;
          double norm = 0.0;
          for (std::ptrdiff_t p = p_lo; p <= p_hi; ++p) {
            const double gw = time_window[static_cast<std::size_t>(p + half_g)];
            norm += gw;
            acc += gw * z.samples[static_cast<std::size_t>(t + p + tau)] *
                   std::conj(z.samples[static_cast<std::size_t>(t + p - tau)]);
          }
          if (!(norm > 0.0)) continue;
          acc /= norm;
        }
        if (tau == 0) {
          r[0] = taper ? acc * lag_window[static_cast<std::size_t>(half_h)] : acc;
        } else {
          const double wp = taper ? lag_window[static_cast<std::size_t>(half_h + tau)] : 1.0;
          const double wm = taper ? lag_window[static_cast<std::size_t>(half_h - tau)] : 1.0;
          r[static_cast<std::size_t>(tau)] = wp * acc;
          r[nfft - static_cast<std::size_t>(tau)] = wm * std::conj(acc);
        }
      }
      fft.execute();
      double* out = g.values.data() + static_cast<std::size_t>(t) * nfft;
      for (std::size_t k = 0; k < nfft; ++k) {
        out[k] = r[k].real();
        max_real = std::max(max_real, std::abs(r[k].real()));
        max_imag = std::max(max_imag, std::abs(r[k].imag()));
      }
    }
  }
  g.meta.imag_residue = max_real > 0.0 ? max_imag / max_real : 0.0;
  if (g.meta.imag_residue >= 1e-9) {
    throw std::logic_error("Wigner distribution has a non-negligible imaginary part");
  }
  return g;
}

}  // namespace detail

namespace {

ComplexSignal wigner_input(const SampledSignal& x, bool use_analytic) {
  return use_analytic ? analytic_signal(x) : ComplexSignal::from_real(x);
}

void require_wigner_length(std::size_t n) {
  if (n < 4) throw InvalidArgument("Wigner distributions need at least 4 samples");
}

void require_odd(const WindowSpec& w, const char* what) {
  if (w.length_samples == 0 || w.length_samples % 2 == 0) {
    throw InvalidArgument(std::string(what) + " length must be odd");
  }
}

// The lag window is centered on zero lag and normalized to 1 there.
std::vector<double> centered_lag_window(const WindowSpec& spec) {
  auto h = make_window(spec);
  const double c = h[h.size() / 2];
  if (!(c > 0.0)) throw InvalidArgument("lag window has zero center value");
  for (auto& v : h) v /= c;
  return h;
}

}  // namespace

TfdGrid stft(const ComplexSignal& z, const WindowSpec& window, std::size_t hop, std::size_t nfft) {
  auto g = detail::windowed_dft(z, window, hop, nfft, TfdMethod::stft);
  g.meta.analytic_input = false;
  return g;
}

TfdGrid stft(const SampledSignal& x, const WindowSpec& window, std::size_t hop, std::size_t nfft) {
  x.validate();
  return stft(ComplexSignal::from_real(x), window, hop, nfft);
}

TfdGrid wvd(const ComplexSignal& z, std::size_t fft_length) {
  require_wigner_length(z.size());
  const auto nfft = wigner_fft_length(fft_length, z.size(), z.sample_rate_hz, 0.1231);
  return detail::wigner(z, {}, {}, nfft, TfdMethod::wvd);
}

TfdGrid wvd(const SampledSignal& x, std::size_t fft_length, bool use_analytic) {
  x.validate();
  require_wigner_length(x.size());
  auto g = wvd(wigner_input(x, use_analytic), fft_length);
  g.meta.analytic_input = use_analytic;
  return g;
}

TfdGrid pwvd(const ComplexSignal& z, const WindowSpec& lag_window, std::size_t fft_length) {
  require_wigner_length(z.size());
  require_odd(lag_window, "lag window");
  const auto h = centered_lag_window(lag_window);
  const auto nfft = wigner_fft_length(fft_length, z.size(), z.sample_rate_hz, 0.1231);
  auto g = detail::wigner(z, {}, h, nfft, TfdMethod::pwvd);
  g.meta.lag_window = lag_window;
  return g;
}

TfdGrid pwvd(const SampledSignal& x, const WindowSpec& lag_window, std::size_t fft_length,
             bool use_analytic) {
  x.validate();
  require_wigner_length(x.size());
  require_odd(lag_window, "lag window");
  auto g = pwvd(wigner_input(x, use_analytic), lag_window, fft_length);
  g.meta.analytic_input = use_analytic;
  return g;
}

TfdGrid spwvd(const ComplexSignal& z, const WindowSpec& time_window, const WindowSpec& lag_window,
              std::size_t fft_length) {
  require_wigner_length(z.size());
  require_odd(time_window, "time window");
  require_odd(lag_window, "lag window");
  const auto gwin = make_window(time_window);
  const auto h = centered_lag_window(lag_window);
  const auto nfft = wigner_fft_length(fft_length, z.size(), z.sample_rate_hz, 0.1231);
  auto g = detail::wigner(z, gwin, h, nfft, TfdMethod::spwvd);
  g.meta.time_window = time_window;
  g.meta.lag_window = lag_window;
  return g;
}

TfdGrid spwvd(const SampledSignal& x, const WindowSpec& time_window, const WindowSpec& lag_window,
              std::size_t fft_length, bool use_analytic) {
  x.validate();
  require_wigner_length(x.size());
  require_odd(time_window, "time window");
  require_odd(lag_window, "lag window");
  auto g = spwvd(wigner_input(x, use_analytic), time_window, lag_window, fft_length);
  g.meta.analytic_input = use_analytic;
  return g;
}

Psd psd_from_tfd(const TfdGrid& g) {
  if (g.empty() || g.n_times() == 0 || g.n_freqs() == 0) throw InvalidArgument("empty grid");
  const bool magnitude = is_wigner_family(g.method);
  Psd psd;
  psd.freqs_hz = g.freqs_hz;
  psd.power.assign(g.n_freqs(), 0.0);
  for (std::size_t t = 0; t < g.n_times(); ++t) {
    const auto row = g.row(t);
    for (std::size_t f = 0; f < row.size(); ++f) psd.power[f] += magnitude ? std::abs(row[f]) : row[f];
  }
  double total = 0.0;
  for (auto& p : psd.power) {
    p /= static_cast<double>(g.n_times());
    total += p;
  }
  if (!(total > 0.0)) {
    std::fill(psd.power.begin(), psd.power.end(), 0.0);
    psd.all_zero = true;
    return psd;
  }
  for (auto& p : psd.power) p /= total;
  return psd;
}

ResolutionReport resolution_report(const TfdGrid& g) {
  if (g.n_times() < 2 || g.n_freqs() < 2) throw InvalidArgument("grid needs >= 2 points per axis");
  if (!(g.sample_rate_hz > 0.0) || g.meta.fft_length == 0) throw InvalidArgument("grid lacks sampling metadata");
  const double fs = g.sample_rate_hz;
  const double nfft = static_cast<double>(g.meta.fft_length);
  ResolutionReport r;
  r.temporal_resolution_ms = 1000.0 * static_cast<double>(g.meta.hop_samples) / fs;
  r.nyquist_hz = fs / 2.0;
  if (is_wigner_family(g.method)) {
    r.spectral_resolution_hz = fs / (2.0 * nfft);
    r.folding_hz = g.meta.analytic_input ? r.nyquist_hz : r.nyquist_hz / 2.0;
  } else {
    r.spectral_resolution_hz = fs / nfft;
    r.folding_hz = r.nyquist_hz;
  }
  return r;
}

std::vector<double> psd_peaks(const Psd& psd, double floor_db, std::optional<Band> band) {
  std::vector<double> peaks;
  const auto& p = psd.power;
  if (p.size() < 3 || psd.all_zero) return peaks;
  const double top = *std::max_element(p.begin(), p.end());
  if (!(top > 0.0)) return peaks;
  const double floor = top * std::pow(10.0, floor_db / 10.0);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double f = psd.freqs_hz[i];
    if (band && (f < band->first || f > band->second)) continue;
    if (p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] >= floor) peaks.push_back(f);
  }
  return peaks;
}

}  // namespace scgtf
