#pragma once

#include <cstdint>

#include "driftbandit/aff.hpp"

namespace driftbandit {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
  bool operator==(const BetaParams&) const = default;
};

// Conjugate Bernoulli update; an unselected arm is returned unchanged.
BetaParams ts_update(BetaParams params, bool selected, int reward);

// Posterior built from the arm's idle-discounted AFF sums:
// (alpha0 + m~, beta0 + w~ - m~).
BetaParams aff_ts_update(double alpha0, double beta0, const aff::AffState& state,
                         std::int64_t t_now, std::int64_t num_arms);

// Dynamic TS update of the selected arm with threshold C: conjugate below
// the threshold, otherwise rescaled by C / (C + 1) so alpha + beta stays at C.
// Throws std::invalid_argument for C <= 0.
BetaParams dts_update(BetaParams params, int reward, double threshold);

enum class DtsVariant { kInverseVariance = 1, kWeightSum = 2 };

// Per-step threshold tuned from the arm's AFF state: 4 / s2 - 1 (variant 1)
// or w - 1 (variant 2). Falls back to `initial` whenever that value is not
// a positive finite number.
double aff_dts_threshold(DtsVariant variant, const aff::AffState& state,
                         double initial);

}  // namespace driftbandit
