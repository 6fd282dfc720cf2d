#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "vocxai/grid.hpp"

namespace vocxai {

struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

// Min-max quantization to 0..255 with rows flipped so that raster row 0 (the
// lowest frequency bin) ends up at the bottom of the image. A constant raster
// renders as all zeros.
PgmImage quantize_for_display(const Raster& raster);

// Binary P5 writer, maxval 255.
void render_pgm(const Raster& raster, const std::filesystem::path& path);

PgmImage read_pgm(const std::filesystem::path& path);

}  // namespace vocxai
