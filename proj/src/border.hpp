#pragma once

#include <cstddef>

namespace vocxai::detail {

// Half-sample symmetric extension (d c b a | a b c d | d c b a), valid for
// any integer index.
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return m < static_cast<std::ptrdiff_t>(n) ? static_cast<std::size_t>(m)
                                            : static_cast<std::size_t>(period - 1 - m);
}

}  // namespace vocxai::detail
