#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scgtf/signal.hpp"

namespace scgtf {

enum class TfdMethod { stft, wvd, pwvd, spwvd, pct };

const char* to_string(TfdMethod m);
TfdMethod tfd_method_from_string(const std::string& name);

// WVD-family grids are real but may be negative.
inline bool is_wigner_family(TfdMethod m) {
  return m == TfdMethod::wvd || m == TfdMethod::pwvd || m == TfdMethod::spwvd;
}

using Band = std::pair<double, double>;

// Parameters a grid was computed with. Unused fields stay empty.
struct TfdMeta {
  std::size_t fft_length{0};
  std::size_t hop_samples{1};
  std::optional<WindowSpec> window;       // STFT / PCT analysis window
  std::optional<WindowSpec> time_window;  // SPWVD time smoothing
  std::optional<WindowSpec> lag_window;   // PWVD / SPWVD lag taper
  bool analytic_input{true};
  double imag_residue{0.0};  // WVD family: max |imag| / max |real| before discard
  std::vector<double> kernel_coeffs;  // PCT: alpha_1..alpha_n (Hz/s^k)
  int kernel_iterations{0};
  bool kernel_converged{true};
  int decimation_factor{1};
  std::vector<std::string> warnings;
};

// Time x frequency distribution, values row-major [time][freq].
struct TfdGrid {
  std::vector<double> times_s;
  std::vector<double> freqs_hz;
  std::vector<double> values;
  TfdMethod method{TfdMethod::stft};
  double sample_rate_hz{0.0};
  TfdMeta meta;

  std::size_t n_times() const { return times_s.size(); }
  std::size_t n_freqs() const { return freqs_hz.size(); }
  double at(std::size_t t, std::size_t f) const { return values[t * freqs_hz.size() + f]; }
  std::span<const double> row(std::size_t t) const {
    return {values.data() + t * freqs_hz.size(), freqs_hz.size()};
  }
  bool empty() const { return values.empty(); }
};

struct ResolutionReport {
  double temporal_resolution_ms{0.0};
  double spectral_resolution_hz{0.0};
  double nyquist_hz{0.0};
  double folding_hz{0.0};
};

struct StftConfig {
  WindowSpec window{WindowSpec::hann(128)};
  std::size_t hop_samples{4};
  std::size_t fft_length{512};
};

struct WvdConfig {
  // 0 selects max(2N, ceil(fs / (2 * max_bin_spacing_hz))).
  std::size_t fft_length{0};
  double max_bin_spacing_hz{0.1231};
  bool use_analytic{true};
};

struct SpwvdConfig {
  WindowSpec time_window{WindowSpec::hann(31)};
  WindowSpec lag_window{WindowSpec::hann(63)};
  std::size_t fft_length{0};
  double max_bin_spacing_hz{0.1231};
  bool use_analytic{true};
};

// Lag-FFT length used by the WVD family for an n-sample signal.
std::size_t wigner_fft_length(std::size_t requested, std::size_t n, double sample_rate_hz,
                              double max_bin_spacing_hz);

// Spectrogram: squared magnitude of the zero-padded windowed DFT, frame k
// covering samples [k*hop, k*hop + L), stamped at the window center. Bins
// 0..fft/2 inclusive.
TfdGrid stft(const SampledSignal& x, const WindowSpec& window, std::size_t hop_samples,
             std::size_t fft_length);
TfdGrid stft(const ComplexSignal& z, const WindowSpec& window, std::size_t hop_samples,
             std::size_t fft_length);
inline TfdGrid stft(const SampledSignal& x, const StftConfig& cfg) {
  return stft(x, cfg.window, cfg.hop_samples, cfg.fft_length);
}

// Discrete Wigner-Ville distribution, one row per input sample. Bin k is
// k * fs / (2 * fft_length). With use_analytic the analytic associate is used;
// otherwise the real samples go in directly and content above fs/4 folds.
TfdGrid wvd(const SampledSignal& x, std::size_t fft_length = 0, bool use_analytic = true);
TfdGrid wvd(const ComplexSignal& z, std::size_t fft_length = 0);

// Pseudo-WVD: lag product tapered by an odd-length lag window.
TfdGrid pwvd(const SampledSignal& x, const WindowSpec& lag_window, std::size_t fft_length = 0,
             bool use_analytic = true);
TfdGrid pwvd(const ComplexSignal& z, const WindowSpec& lag_window, std::size_t fft_length = 0);

// Smoothed pseudo-WVD with a separable kernel: time_window averages the lag
// product over neighbouring instants (renormalized to unit sum at the edges),
// lag_window tapers it over lag.
TfdGrid spwvd(const SampledSignal& x, const WindowSpec& time_window, const WindowSpec& lag_window,
              std::size_t fft_length = 0, bool use_analytic = true);
TfdGrid spwvd(const ComplexSignal& z, const WindowSpec& time_window, const WindowSpec& lag_window,
              std::size_t fft_length = 0);
inline TfdGrid spwvd(const SampledSignal& x, const SpwvdConfig& cfg) {
  return spwvd(x, cfg.time_window, cfg.lag_window,
               wigner_fft_length(cfg.fft_length, x.size(), x.sample_rate_hz, cfg.max_bin_spacing_hz),
               cfg.use_analytic);
}

struct Psd {
  std::vector<double> freqs_hz;
  std::vector<double> power;  // sums to 1 unless all_zero
  bool all_zero{false};
};

// Frequency marginal averaged over time and normalized to unit sum. WVD-family
// grids are integrated in magnitude so oscillating interference shows up
// rather than cancelling.
Psd psd_from_tfd(const TfdGrid& g);

ResolutionReport resolution_report(const TfdGrid& g);

// Frequencies of the local maxima of `psd` within `band` whose level is at
// least `floor_db` relative to the global maximum of the whole spectrum.
std::vector<double> psd_peaks(const Psd& psd, double floor_db = -20.0,
                              std::optional<Band> band = std::nullopt);

}  // namespace scgtf
