#pragma once

#include <span>
#include <vector>

namespace driftbandit {

// Linearly interpolated quantile of sorted data (the "type 7" rule used by
// most plotting packages for boxplots). p in [0,1].
double quantile_sorted(std::span<const double> sorted, double p);

struct FiveNumber {
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Throws std::invalid_argument on empty input.
FiveNumber five_number_summary(std::span<const double> values);

}  // namespace driftbandit
