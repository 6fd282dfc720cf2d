#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace vocxai::detail {

// Real-input FFT of fixed size backed by FFTW. Plans are created with
// FFTW_ESTIMATE (deterministic algorithm choice) under a global lock; an
// instance is single-threaded, separate instances may run concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }

  // in.size() == n, out.size() == n/2 + 1
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalized inverse: out = n * x for a forward/inverse pair.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
};

}  // namespace vocxai::detail
