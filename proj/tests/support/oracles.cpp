#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t count_ones(const BoolMatrix& m) {
  std::size_t n = 0;
  for (const auto& row : m) {
    for (int v : row) n += v != 0;
  }
  return n;
}

}  // namespace

std::vector<double> periodic_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(std::sin(kPi * double(i) / double(n)), 2);
  return w;
}

std::ptrdiff_t mirror_exclusive(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

std::ptrdiff_t mirror_inclusive(std::ptrdiff_t i, std::ptrdiff_t n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

CMatrix naive_stft(const std::vector<double>& x, std::size_t n, std::size_t hop,
                   const std::vector<double>& window) {
  const auto len = static_cast<std::ptrdiff_t>(x.size());
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const std::size_t padded = x.size() + n;  // two half-frame pads
  const std::size_t frames = 1 + (padded - n + hop - 1) / hop;
  auto sample = [&](std::ptrdiff_t pos) -> double {
    // pos indexes the padded signal
    if (pos >= static_cast<std::ptrdiff_t>(padded)) return 0.0;
    return x[static_cast<std::size_t>(mirror_exclusive(pos - half, len))];
  };
  CMatrix out(n / 2 + 1, std::vector<std::complex<double>>(frames));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k <= n / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = sample(static_cast<std::ptrdiff_t>(t * hop + i)) * window[i];
        acc += v * std::polar(1.0, -2.0 * kPi * double(k * i % n) / double(n));
      }
      out[k][t] = acc;
    }
  }
  return out;
}

std::vector<double> naive_istft(const CMatrix& spec, std::size_t n, std::size_t hop,
                                const std::vector<double>& window, std::size_t length) {
  const std::size_t frames = spec.front().size();
  const std::size_t total = (frames - 1) * hop + n;
  std::vector<double> num(total, 0.0);
  std::vector<double> den(total, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      // Hermitian-symmetric inverse DFT, real part only.
      double v = spec[0][t].real();
      for (std::size_t k = 1; k < n / 2; ++k) {
        v += 2.0 * (spec[k][t] * std::polar(1.0, 2.0 * kPi * double(k * i % n) / double(n))).real();
      }
      v += spec[n / 2][t].real() * ((i % 2 == 0) ? 1.0 : -1.0);
      v /= double(n);
      num[t * hop + i] += v * window[i];
      den[t * hop + i] += window[i] * window[i];
    }
  }
  std::vector<double> y(length);
  for (std::size_t j = 0; j < length; ++j) {
    const std::size_t p = j + n / 2;
    y[j] = num[p] / std::max(den[p], 1e-12);
  }
  return y;
}

std::vector<double> gaussian_taps(std::size_t size, double var) {
  std::vector<double> g(size);
  const double c = (double(size) - 1.0) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    g[i] = std::exp(-(double(i) - c) * (double(i) - c) / (2.0 * var));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

Matrix dense_smooth(const Matrix& m, const std::vector<double>& freq_taps,
                    const std::vector<double>& time_taps) {
  const auto rows = static_cast<std::ptrdiff_t>(m.size());
  const auto cols = static_cast<std::ptrdiff_t>(m.front().size());
  const auto hf = static_cast<std::ptrdiff_t>(freq_taps.size() / 2);
  const auto ht = static_cast<std::ptrdiff_t>(time_taps.size() / 2);
  Matrix out(m.size(), std::vector<double>(m.front().size(), 0.0));
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t a = -hf; a <= hf; ++a) {
        for (std::ptrdiff_t b = -ht; b <= ht; ++b) {
          const double w = freq_taps[std::size_t(a + hf)] * time_taps[std::size_t(b + ht)];
          acc += w * m[std::size_t(mirror_inclusive(r + a, rows))][std::size_t(mirror_inclusive(c + b, cols))];
        }
      }
      out[std::size_t(r)][std::size_t(c)] = acc;
    }
  }
  return out;
}

double sorted_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = (double(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - double(lo)) * (v[hi] - v[lo]);
}

double iou(const BoolMatrix& p, const BoolMatrix& g) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    for (std::size_t c = 0; c < p[r].size(); ++c) {
      inter += p[r][c] && g[r][c];
      uni += p[r][c] || g[r][c];
    }
  }
  return uni == 0 ? 1.0 : double(inter) / double(uni);
}

double f1(const BoolMatrix& p, const BoolMatrix& g) {
  std::size_t inter = 0;
  for (std::size_t r = 0; r < p.size(); ++r) {
    for (std::size_t c = 0; c < p[r].size(); ++c) inter += p[r][c] && g[r][c];
  }
  const std::size_t total = count_ones(p) + count_ones(g);
  return total == 0 ? 1.0 : 2.0 * double(inter) / double(total);
}

double gdice(const BoolMatrix& p, const BoolMatrix& g) {
  double num = 0.0, den = 0.0;
  for (int label : {1, 0}) {
    double inter = 0, np = 0, ng = 0;
    for (std::size_t r = 0; r < p.size(); ++r) {
      for (std::size_t c = 0; c < p[r].size(); ++c) {
        const bool pl = (p[r][c] != 0) == (label == 1);
        const bool gl = (g[r][c] != 0) == (label == 1);
        inter += pl && gl;
        np += pl;
        ng += gl;
      }
    }
    const double w = 1.0 / (ng * ng + 1e-8);
    num += w * 2.0 * inter;
    den += w * (np + ng);
  }
  return den == 0 ? 1.0 : num / den;
}

BoolMatrix boundary(const BoolMatrix& m) {
  const auto rows = static_cast<std::ptrdiff_t>(m.size());
  const auto cols = static_cast<std::ptrdiff_t>(m.front().size());
  auto get = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    return r >= 0 && r < rows && c >= 0 && c < cols && m[std::size_t(r)][std::size_t(c)] != 0;
  };
  BoolMatrix out(m.size(), std::vector<int>(m.front().size(), 0));
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      const bool eroded = get(r, c) && get(r - 1, c) && get(r + 1, c) && get(r, c - 1) && get(r, c + 1);
      out[std::size_t(r)][std::size_t(c)] = get(r, c) && !eroded;
    }
  }
  return out;
}

double fbound(const BoolMatrix& p, const BoolMatrix& g, int tol) {
  const BoolMatrix bp = boundary(p);
  const BoolMatrix bg = boundary(g);
  struct Pt {
    int r, c;
  };
  auto points = [](const BoolMatrix& m) {
    std::vector<Pt> pts;
    for (std::size_t r = 0; r < m.size(); ++r) {
      for (std::size_t c = 0; c < m[r].size(); ++c) {
        if (m[r][c]) pts.push_back({int(r), int(c)});
      }
    }
    return pts;
  };
  const auto pp = points(bp);
  const auto gp = points(bg);
  if (pp.empty() && gp.empty()) return 1.0;
  if (pp.empty() || gp.empty()) return 0.0;
  auto frac = [tol](const std::vector<Pt>& from, const std::vector<Pt>& to) {
    std::size_t hit = 0;
    for (const Pt& a : from) {
      int best = 1 << 30;
      for (const Pt& b : to) best = std::min(best, std::max(std::abs(a.r - b.r), std::abs(a.c - b.c)));
      hit += best <= tol;
    }
    return double(hit) / double(from.size());
  };
  const double prec = frac(pp, gp);
  const double rec = frac(gp, pp);
  return prec + rec == 0.0 ? 0.0 : 2.0 * prec * rec / (prec + rec);
}

double ssim(const Matrix& a, const Matrix& b) {
  const auto rows = static_cast<std::ptrdiff_t>(a.size());
  const auto cols = static_cast<std::ptrdiff_t>(a.front().size());
  const double c1 = 1e-4, c2 = 9e-4;
  double total = 0.0;
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      std::vector<double> wa, wb;
      for (std::ptrdiff_t dr = -3; dr <= 3; ++dr) {
        for (std::ptrdiff_t dc = -3; dc <= 3; ++dc) {
          const auto rr = std::size_t(mirror_inclusive(r + dr, rows));
          const auto cc = std::size_t(mirror_inclusive(c + dc, cols));
          wa.push_back(a[rr][cc]);
          wb.push_back(b[rr][cc]);
        }
      }
      double ma = 0, mb = 0;
      for (std::size_t i = 0; i < wa.size(); ++i) {
        ma += wa[i];
        mb += wb[i];
      }
      ma /= 49.0;
      mb /= 49.0;
      double va = 0, vb = 0, cov = 0;
      for (std::size_t i = 0; i < wa.size(); ++i) {
        va += (wa[i] - ma) * (wa[i] - ma);
        vb += (wb[i] - mb) * (wb[i] - mb);
        cov += (wa[i] - ma) * (wb[i] - mb);
      }
      va /= 49.0;
      vb /= 49.0;
      cov /= 49.0;
      total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
  }
  return total / double(rows * cols);
}

FaithResult faithfulness(const std::vector<FaithItem>& items, double tie_tol) {
  double increased = 0, drop = 0, gain = 0, kept = 0;
  for (FaithItem it : items) {
    if (std::abs(it.masked - it.base) <= tie_tol) it.masked = it.base;
    if (it.masked > it.base) increased += 1;
    if (it.base > it.masked) drop += (it.base - it.masked) / std::max(it.base, 1e-8);
    if (it.masked > it.base && it.base < 1.0) gain += (it.masked - it.base) / (1.0 - it.base);
    if ((it.masked >= 0.5) == (it.base >= 0.5)) kept += 1;
  }
  const double n = double(items.size());
  return {100.0 * increased / n, 100.0 * drop / n, 100.0 * gain / n, kept / n};
}

}  // namespace oracle
