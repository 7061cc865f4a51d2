#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace bflow::fft {

using cplx = std::complex<double>;

enum class Direction { forward = -1, backward = +1 };

namespace detail {
struct PlanDeleter {
  void operator()(void* plan) const noexcept;
};
struct MemoryDeleter {
  void operator()(void* p) const noexcept;
};
using PlanHandle = std::unique_ptr<void, PlanDeleter>;
template <class T>
using Buffer = std::unique_ptr<T[], MemoryDeleter>;
}  // namespace detail

// Unnormalized transforms over owned, FFTW-aligned buffers. Plans are created
// under a process-wide lock; execution is thread-safe per object.

/// 1D complex transform, in place on `data()`.
class ComplexFft {
 public:
  ComplexFft(std::size_t n, Direction dir);
  std::span<cplx> data() noexcept { return {data_.get(), n_}; }
  void execute() noexcept;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  detail::Buffer<cplx> data_;
  detail::PlanHandle plan_;
};

/// 1D real-to-half-complex: N reals -> N/2+1 coefficients.
class RealToComplex {
 public:
  explicit RealToComplex(std::size_t n);
  std::span<double> input() noexcept { return {in_.get(), n_}; }
  std::span<cplx> output() noexcept { return {out_.get(), n_ / 2 + 1}; }
  void execute() noexcept;

 private:
  std::size_t n_;
  detail::Buffer<double> in_;
  detail::Buffer<cplx> out_;
  detail::PlanHandle plan_;
};

/// 1D half-complex-to-real: N/2+1 coefficients -> N reals. Clobbers input.
class ComplexToReal {
 public:
  explicit ComplexToReal(std::size_t n);
  std::span<cplx> input() noexcept { return {in_.get(), n_ / 2 + 1}; }
  std::span<double> output() noexcept { return {out_.get(), n_}; }
  void execute() noexcept;

 private:
  std::size_t n_;
  detail::Buffer<cplx> in_;
  detail::Buffer<double> out_;
  detail::PlanHandle plan_;
};

/// 2D complex transform over `rows x cols` row-major data, in place.
class ComplexFft2d {
 public:
  ComplexFft2d(std::size_t rows, std::size_t cols, Direction dir);
  std::span<cplx> data() noexcept { return {data_.get(), rows_ * cols_}; }
  void execute() noexcept;

 private:
  std::size_t rows_, cols_;
  detail::Buffer<cplx> data_;
  detail::PlanHandle plan_;
};

/// 2D real <-> half-complex pair over `rows x cols` reals; the spectrum has
/// rows x (cols/2+1) entries.
class RealFft2d {
 public:
  RealFft2d(std::size_t rows, std::size_t cols);
  std::span<double> real() noexcept { return {real_.get(), rows_ * cols_}; }
  std::span<cplx> spectrum() noexcept { return {spec_.get(), rows_ * (cols_ / 2 + 1)}; }
  void forward() noexcept;
  void backward() noexcept;  // clobbers spectrum()

 private:
  std::size_t rows_, cols_;
  detail::Buffer<double> real_;
  detail::Buffer<cplx> spec_;
  detail::PlanHandle forward_, backward_;
};

/// Signed wavenumber 2*pi*n'/extent of FFT bin `index` (n' folded into
/// [-count/2, count/2); the Nyquist bin maps to -count/2).
double angular_frequency(std::size_t index, std::size_t count, double extent) noexcept;

}  // namespace bflow::fft
