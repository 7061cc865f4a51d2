#include "bflow/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <numbers>

namespace bflow::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
detail::Buffer<T> allocate(std::size_t n) {
  void* p = fftw_malloc(sizeof(T) * (n == 0 ? 1 : n));
  if (p == nullptr) throw std::bad_alloc();
  return detail::Buffer<T>(static_cast<T*>(p));
}

fftw_complex* as_fftw(cplx* p) noexcept { return reinterpret_cast<fftw_complex*>(p); }

fftw_plan as_plan(const detail::PlanHandle& h) noexcept { return static_cast<fftw_plan>(h.get()); }

template <class MakePlan>
detail::PlanHandle make_plan(MakePlan&& make) {
  std::lock_guard lock(planner_mutex());
  fftw_plan p = make();
  if (p == nullptr) throw std::runtime_error("fftw: plan creation failed");
  return detail::PlanHandle(p);
}

}  // namespace

namespace detail {
void PlanDeleter::operator()(void* plan) const noexcept {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan));
}
void MemoryDeleter::operator()(void* p) const noexcept { fftw_free(p); }
}  // namespace detail

ComplexFft::ComplexFft(std::size_t n, Direction dir) : n_(n), data_(allocate<cplx>(n)) {
  plan_ = make_plan([&] {
    return fftw_plan_dft_1d(static_cast<int>(n), as_fftw(data_.get()), as_fftw(data_.get()),
                            static_cast<int>(dir), FFTW_ESTIMATE);
  });
}

void ComplexFft::execute() noexcept { fftw_execute(as_plan(plan_)); }

RealToComplex::RealToComplex(std::size_t n)
    : n_(n), in_(allocate<double>(n)), out_(allocate<cplx>(n / 2 + 1)) {
  plan_ = make_plan([&] {
    return fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), as_fftw(out_.get()),
                                FFTW_ESTIMATE);
  });
}

void RealToComplex::execute() noexcept { fftw_execute(as_plan(plan_)); }

ComplexToReal::ComplexToReal(std::size_t n)
    : n_(n), in_(allocate<cplx>(n / 2 + 1)), out_(allocate<double>(n)) {
  plan_ = make_plan([&] {
    return fftw_plan_dft_c2r_1d(static_cast<int>(n), as_fftw(in_.get()), out_.get(),
                                FFTW_ESTIMATE);
  });
}

void ComplexToReal::execute() noexcept { fftw_execute(as_plan(plan_)); }

ComplexFft2d::ComplexFft2d(std::size_t rows, std::size_t cols, Direction dir)
    : rows_(rows), cols_(cols), data_(allocate<cplx>(rows * cols)) {
  plan_ = make_plan([&] {
    return fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols),
                            as_fftw(data_.get()), as_fftw(data_.get()), static_cast<int>(dir),
                            FFTW_ESTIMATE);
  });
}

void ComplexFft2d::execute() noexcept { fftw_execute(as_plan(plan_)); }

RealFft2d::RealFft2d(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      real_(allocate<double>(rows * cols)),
      spec_(allocate<cplx>(rows * (cols / 2 + 1))) {
  forward_ = make_plan([&] {
    return fftw_plan_dft_r2c_2d(static_cast<int>(rows), static_cast<int>(cols), real_.get(),
                                as_fftw(spec_.get()), FFTW_ESTIMATE);
  });
  backward_ = make_plan([&] {
    return fftw_plan_dft_c2r_2d(static_cast<int>(rows), static_cast<int>(cols),
                                as_fftw(spec_.get()), real_.get(), FFTW_ESTIMATE);
  });
}

void RealFft2d::forward() noexcept { fftw_execute(as_plan(forward_)); }
void RealFft2d::backward() noexcept { fftw_execute(as_plan(backward_)); }

double angular_frequency(std::size_t index, std::size_t count, double extent) noexcept {
  const auto n = static_cast<std::ptrdiff_t>(index);
  const auto c = static_cast<std::ptrdiff_t>(count);
  const std::ptrdiff_t signed_index = (2 * n < c) ? n : n - c;
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index) / extent;
}

}  // namespace bflow::fft
