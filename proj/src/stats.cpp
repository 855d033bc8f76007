#include "driftbandit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftbandit {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

FiveNumber five_number_summary(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("five_number_summary: empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  FiveNumber f;
  double sum = 0.0;
  for (double x : values) sum += x;
  f.mean = sum / static_cast<double>(values.size());
  f.min = v.front();
  f.q1 = quantile_sorted(v, 0.25);
  f.median = quantile_sorted(v, 0.5);
  f.q3 = quantile_sorted(v, 0.75);
  f.max = v.back();
  return f;
}

}  // namespace driftbandit
