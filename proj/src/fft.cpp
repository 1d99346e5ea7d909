#include "scgtf/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <utility>

#include "scgtf/error.hpp"

namespace scgtf {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n, Direction dir) : n_(n) {
  if (n == 0) throw InvalidArgument("FFT length must be positive");
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* buf = fftw_alloc_complex(n);
  if (buf == nullptr) throw std::bad_alloc();
  std::memset(buf, 0, sizeof(fftw_complex) * n);
  data_ = buf;
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                           dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE);
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      data_(std::exchange(other.data_, nullptr)),
      plan_(std::exchange(other.plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    data_ = std::exchange(other.data_, nullptr);
    plan_ = std::exchange(other.plan_, nullptr);
  }
  return *this;
}

void Fft::release() {
  if (plan_ == nullptr && data_ == nullptr) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  if (data_ != nullptr) fftw_free(data_);
  plan_ = nullptr;
  data_ = nullptr;
}

std::span<std::complex<double>> Fft::buffer() {
  // fftw_complex is layout-compatible with std::complex<double>.
  return {reinterpret_cast<std::complex<double>*>(data_), n_};
}

void Fft::execute() { fftw_execute(static_cast<fftw_plan>(plan_)); }

void Fft::transform(std::span<const std::complex<double>> in,
                    std::span<std::complex<double>> out) {
  if (in.size() > n_ || out.size() < n_) throw InvalidArgument("FFT buffer size mismatch");
  auto buf = buffer();
  std::copy(in.begin(), in.end(), buf.begin());
  std::fill(buf.begin() + static_cast<std::ptrdiff_t>(in.size()), buf.end(), std::complex<double>{});
  execute();
  std::copy(buf.begin(), buf.end(), out.begin());
}

}  // namespace scgtf
