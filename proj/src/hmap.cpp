#include "vocxai/hmap.hpp"
#include "vocxai/errors.hpp"

#include <cmath>
#include <limits>

#include "byte_io.hpp"
#include "file_util.hpp"

namespace vocxai::hmap {

namespace {

std::string header(std::uint8_t dtype, std::size_t rows, std::size_t cols) {
  if (rows > std::numeric_limits<std::uint32_t>::max() ||
      cols > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("HMAP dimensions exceed 32 bits");
  }
  std::string out = "HMAP";
  out.push_back(static_cast<char>(kVersion));
  out.push_back(static_cast<char>(dtype));
  detail::put_u16(out, 0);
  detail::put_u32(out, static_cast<std::uint32_t>(rows));
  detail::put_u32(out, static_cast<std::uint32_t>(cols));
  return out;
}

}  // namespace

std::string encode(const Heatmap& heatmap) {
  std::string out = header(kDtypeHeatmap, heatmap.rows(), heatmap.cols());
  out.reserve(kHeaderSize + 4 * heatmap.data().size());
  for (double v : heatmap.data().values()) detail::put_f32(out, static_cast<float>(v));
  return out;
}

std::string encode(const BinaryMask& mask) {
  std::string out = header(kDtypeMask, mask.rows(), mask.cols());
  for (std::uint8_t v : mask.data.values()) out.push_back(static_cast<char>(v ? 1 : 0));
  return out;
}

Payload decode(std::string_view bytes) {
  if (bytes.size() < kHeaderSize) throw FormatError("HMAP header truncated");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.substr(0, 4) != "HMAP") throw FormatError("HMAP magic: expected \"HMAP\"");
  if (p[4] != kVersion) throw FormatError("HMAP version: unsupported value " + std::to_string(p[4]));
  const std::uint8_t dtype = p[5];
  if (dtype != kDtypeHeatmap && dtype != kDtypeMask) {
    throw FormatError("HMAP dtype: unsupported value " + std::to_string(dtype));
  }
  if (detail::get_u16(p + 6) != 0) throw FormatError("HMAP reserved: must be 0");
  const std::size_t rows = detail::get_u32(p + 8);
  const std::size_t cols = detail::get_u32(p + 12);
  if (rows == 0 || cols == 0) throw FormatError("HMAP rows/cols: dimensions must be non-zero");
  const std::size_t elem = dtype == kDtypeHeatmap ? 4 : 1;
  const std::size_t need = rows * cols * elem;
  const std::size_t have = bytes.size() - kHeaderSize;
  if (have < need) throw FormatError("HMAP payload shorter than rows×cols");
  if (have > need) throw FormatError("HMAP payload longer than rows×cols");

  const unsigned char* body = p + kHeaderSize;
  if (dtype == kDtypeHeatmap) {
    Raster data(rows, cols);
    auto dst = data.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = detail::get_f32(body + 4 * i);
    for (double v : dst) {
      if (!(v >= 0.0 && v <= 1.0)) throw FormatError("HMAP payload: heatmap value outside [0, 1]");
    }
    return Heatmap(std::move(data));
  }
  BinaryMask mask{Grid<std::uint8_t>(rows, cols, 0), MaskOrigin::ground_truth};
  auto dst = mask.data.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (body[i] > 1) throw FormatError("HMAP payload: mask byte other than 0/1");
    dst[i] = body[i];
  }
  return mask;
}

void write(const std::filesystem::path& path, const Heatmap& heatmap) {
  detail::write_file_atomic(path, encode(heatmap));
}

void write(const std::filesystem::path& path, const BinaryMask& mask) {
  detail::write_file_atomic(path, encode(mask));
}

Payload read(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  try {
    return decode(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Heatmap read_as_heatmap(const std::filesystem::path& path) {
  Payload p = read(path);
  if (auto* m = std::get_if<BinaryMask>(&p)) return Heatmap::from_mask(*m);
  return std::get<Heatmap>(std::move(p));
}

BinaryMask read_mask(const std::filesystem::path& path) {
  Payload p = read(path);
  if (auto* m = std::get_if<BinaryMask>(&p)) return std::move(*m);
  throw FormatError(path.string() + ": expected a mask (dtype 1), found a heatmap");
}

}  // namespace vocxai::hmap
