#pragma once

#include <functional>
#include <span>

#include "scgtf/tfd.hpp"

namespace scgtf::detail {

// Called once per frame on the windowed-to-be segment before windowing;
// `first_sample` is the index of seg[0] in the input signal.
using FramePremultiplier =
    std::function<void(std::size_t frame, std::size_t first_sample, std::span<cplx> seg)>;

// Frame-parallel windowed DFT shared by STFT and PCT. Keeps bins 0..fft/2.
TfdGrid windowed_dft(const ComplexSignal& z, const WindowSpec& window, std::size_t hop,
                     std::size_t fft_length, TfdMethod method,
                     const FramePremultiplier& premultiply = nullptr);

// Frame center time of frame k.
inline double frame_center_s(const ComplexSignal& z, std::size_t k, std::size_t hop,
                             std::size_t window_len) {
  return z.start_time_s +
         (static_cast<double>(k * hop) + static_cast<double>(window_len - 1) / 2.0) / z.sample_rate_hz;
}

// Time-parallel separable-kernel Wigner distribution. An empty time_window
// means no time smoothing; an empty lag_window means lags bounded only by the
// signal edges and the FFT length.
TfdGrid wigner(const ComplexSignal& z, std::span<const double> time_window,
               std::span<const double> lag_window, std::size_t fft_length, TfdMethod method);

}  // namespace scgtf::detail
