#pragma once

// Straightforward reference implementations used to cross-check the library.
// They favour obviousness over speed and share no code with src/.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;      // [row][col]
using BoolMatrix = std::vector<std::vector<int>>;     // 0/1 entries
using CMatrix = std::vector<std::vector<std::complex<double>>>;  // [bin][frame]

std::vector<double> periodic_hann(std::size_t n);

// Mirror index for numpy-style "reflect" padding (edge sample not repeated).
std::ptrdiff_t mirror_exclusive(std::ptrdiff_t i, std::ptrdiff_t n);
// Mirror index for half-sample "symmetric" padding (edge sample repeated).
std::ptrdiff_t mirror_inclusive(std::ptrdiff_t i, std::ptrdiff_t n);

// Centered STFT by direct DFT summation. Frame count 1 + ceil((L + 2(n/2) - n) / hop),
// samples beyond the padded signal read as zero.
CMatrix naive_stft(const std::vector<double>& x, std::size_t n, std::size_t hop,
                   const std::vector<double>& window);

// Weighted overlap-add of directly summed inverse DFTs, normalised by the
// summed squared window and trimmed to `length`.
std::vector<double> naive_istft(const CMatrix& spec, std::size_t n, std::size_t hop,
                                const std::vector<double>& window, std::size_t length);

// Normalised 1-D Gaussian taps exp(-(i-c)^2 / (2 var)).
std::vector<double> gaussian_taps(std::size_t size, double var);

// Full 2-D correlation with the outer-product kernel and symmetric borders.
Matrix dense_smooth(const Matrix& m, const std::vector<double>& freq_taps,
                    const std::vector<double>& time_taps);

// Linear-interpolated quantile of sorted values at position (n - 1) q.
double sorted_quantile(std::vector<double> v, double q);

double iou(const BoolMatrix& p, const BoolMatrix& g);
double f1(const BoolMatrix& p, const BoolMatrix& g);
double gdice(const BoolMatrix& p, const BoolMatrix& g);
BoolMatrix boundary(const BoolMatrix& m);
double fbound(const BoolMatrix& p, const BoolMatrix& g, int tol);
double ssim(const Matrix& a, const Matrix& b);

struct FaithItem {
  double base;
  double masked;
};
struct FaithResult {
  double ai, ad, ag, fid_in;
};
FaithResult faithfulness(const std::vector<FaithItem>& items, double tie_tol);

}  // namespace oracle
