#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "vocxai/masks.hpp"

namespace vocxai {

// HMAP container, little-endian:
//   "HMAP" | u8 version (=1) | u8 dtype (0 f32 heatmap, 1 u8 mask)
//   | u16 reserved (=0) | u32 rows | u32 cols | rows*cols payload, row-major
// Rows are frequency bins, columns time frames.
namespace hmap {

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::uint8_t kDtypeHeatmap = 0;
inline constexpr std::uint8_t kDtypeMask = 1;
inline constexpr std::size_t kHeaderSize = 16;

std::string encode(const Heatmap& heatmap);
std::string encode(const BinaryMask& mask);

using Payload = std::variant<Heatmap, BinaryMask>;

// Throws FormatError naming the offending field (magic, version, dtype,
// reserved, rows/cols, payload).
Payload decode(std::string_view bytes);

void write(const std::filesystem::path& path, const Heatmap& heatmap);
void write(const std::filesystem::path& path, const BinaryMask& mask);
Payload read(const std::filesystem::path& path);

// Masks become 0/1 heatmaps.
Heatmap read_as_heatmap(const std::filesystem::path& path);
// Throws FormatError if the file holds a heatmap.
BinaryMask read_mask(const std::filesystem::path& path);

}  // namespace hmap
}  // namespace vocxai
