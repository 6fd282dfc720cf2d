#include "fft.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <mutex>
#include <new>

namespace vocxai::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  real_ = fftw_alloc_real(n);
  spec_ = fftw_alloc_complex(n / 2 + 1);
  if (real_ == nullptr || spec_ == nullptr) {
    fftw_free(real_);
    fftw_free(spec_);
    throw std::bad_alloc();
  }
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
  // c2r destroys its input; the wrapper always refills spec_ before executing.
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_plan_);
    fftw_destroy_plan(inverse_plan_);
  }
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(forward_plan_);
  for (std::size_t k = 0; k < n_ / 2 + 1; ++k) out[k] = {spec_[k][0], spec_[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  for (std::size_t k = 0; k < n_ / 2 + 1; ++k) {
    spec_[k][0] = in[k].real();
    spec_[k][1] = in[k].imag();
  }
  // DC and Nyquist bins of a real signal are real.
  spec_[0][1] = 0.0;
  spec_[n_ / 2][1] = 0.0;
  fftw_execute(inverse_plan_);
  std::copy(real_, real_ + n_, out.begin());
}

}  // namespace vocxai::detail
