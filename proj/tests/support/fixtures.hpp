#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "oracles.hpp"
#include "vocxai/grid.hpp"
#include "vocxai/injector.hpp"
#include "vocxai/masks.hpp"
#include "vocxai/rng.hpp"

namespace fixtures {

inline oracle::BoolMatrix to_bool(const vocxai::BinaryMask& m) {
  oracle::BoolMatrix out(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.at(r, c) ? 1 : 0;
  }
  return out;
}

inline oracle::Matrix to_matrix(const vocxai::Raster& a) {
  oracle::Matrix out(a.rows(), std::vector<double>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = a(r, c);
  }
  return out;
}

inline vocxai::BinaryMask random_mask(vocxai::Rng& rng, std::size_t rows, std::size_t cols,
                                      double density) {
  vocxai::BinaryMask m{vocxai::Grid<std::uint8_t>(rows, cols, 0)};
  for (auto& v : m.data.values()) v = rng.uniform() < density ? 1 : 0;
  return m;
}

inline vocxai::Raster random_raster(vocxai::Rng& rng, std::size_t rows, std::size_t cols) {
  vocxai::Raster r(rows, cols);
  for (auto& v : r.values()) v = rng.uniform();
  return r;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("vocxai-test-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
