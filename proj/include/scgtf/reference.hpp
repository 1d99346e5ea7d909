#pragma once

#include <cstddef>
#include <span>

#include "scgtf/tfd.hpp"

// Serial, direct-DFT versions of the transform kernels. They share no code
// with the FFT/OpenMP path and exist to cross-check it in tests and to give
// the benchmark a baseline. O(N * fft * lags); keep inputs small.
namespace scgtf::reference {

TfdGrid stft(const ComplexSignal& z, const WindowSpec& window, std::size_t hop,
             std::size_t fft_length);

// Smoothed pseudo-WVD by the textbook double sum. Empty time_window means no
// time smoothing; empty lag_window means no lag taper.
TfdGrid wigner(const ComplexSignal& z, std::span<const double> time_window,
               std::span<const double> lag_window, std::size_t fft_length);

// Chirplet transform with kernel alpha_1..alpha_n (Hz/s^k).
TfdGrid pct(const ComplexSignal& z, std::span<const double> alphas, const WindowSpec& window,
            std::size_t hop, std::size_t fft_length);

}  // namespace scgtf::reference
