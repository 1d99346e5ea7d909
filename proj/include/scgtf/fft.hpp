#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace scgtf {

// Owns an FFTW plan and its aligned work buffer for one transform length.
// Instances are not shareable across threads; create one per thread. Plan
// creation and destruction are serialized internally.
class Fft {
 public:
  enum class Direction { forward, inverse };

  Fft(std::size_t n, Direction dir = Direction::forward);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const { return n_; }

  // Work buffer: fill it, call execute(), read the transform back from it.
  std::span<std::complex<double>> buffer();
  void execute();

  // Unnormalized out-of-place convenience; `in` may be shorter than size()
  // and is zero-padded.
  void transform(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

 private:
  void release();

  std::size_t n_{0};
  void* data_{nullptr};
  void* plan_{nullptr};
};

}  // namespace scgtf
