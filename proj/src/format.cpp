#include "driftbandit/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace driftbandit {

std::string format_shortest(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_exact(double x) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

}  // namespace driftbandit
