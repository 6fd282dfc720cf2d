#include "vocxai/pgm.hpp"
#include "vocxai/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "file_util.hpp"

namespace vocxai {

PgmImage quantize_for_display(const Raster& raster) {
  if (raster.empty()) throw InvalidInput("render_pgm: empty raster");
  const auto [lo_it, hi_it] = std::minmax_element(raster.values().begin(), raster.values().end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;

  PgmImage img{raster.cols(), raster.rows(), std::vector<std::uint8_t>(raster.size(), 0)};
  if (range <= 0.0) return img;
  for (std::size_t r = 0; r < raster.rows(); ++r) {
    const std::size_t out_row = raster.rows() - 1 - r;
    for (std::size_t c = 0; c < raster.cols(); ++c) {
      const double v = std::round(255.0 * (raster(r, c) - lo) / range);
      img.pixels[out_row * img.width + c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
  return img;
}

void render_pgm(const Raster& raster, const std::filesystem::path& path) {
  const PgmImage img = quantize_for_display(raster);
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(img.pixels.begin(), img.pixels.end());
  detail::write_file_atomic(path, out);
}

PgmImage read_pgm(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t begin = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(begin, pos - begin);
  };

  if (next_token() != "P5") throw FormatError(path.string() + ": not a binary PGM (P5)");
  PgmImage img;
  try {
    img.width = std::stoul(next_token());
    img.height = std::stoul(next_token());
    if (std::stoul(next_token()) != 255) throw FormatError(path.string() + ": maxval must be 255");
  } catch (const std::logic_error&) {
    throw FormatError(path.string() + ": malformed PGM header");
  }
  ++pos;  // single whitespace byte after maxval
  const std::size_t need = img.width * img.height;
  if (bytes.size() < pos + need) throw FormatError(path.string() + ": truncated PGM payload");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

}  // namespace vocxai
