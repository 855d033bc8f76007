#pragma once

#include <cstdint>

#include "driftbandit/aff.hpp"

namespace driftbandit {

// Confidence level of the Hoeffding bound used by the AFF upper bounds.
inline constexpr double kHoeffdingXi = 0.05;

// sqrt(-ln(xi) k / (2 w^2)): the deviation exceeded with probability xi by
// a forgetting-factor mean with weight sum w and squared-weight sum k.
// Requires w >= 1 and 1 <= k <= w^2; throws std::domain_error otherwise.
double hoeffding_bonus(double w, double k);

inline constexpr double kBernoulliMaxVariance = 0.25;

// Same bound expressed through the ratio k / w^2 (must be positive).
double hoeffding_bonus_from_ratio(double k_over_w2);

// sqrt(2 ln(plays) / pulls), the classic UCB1 width. Zero when plays <= 1.
double ucb_bonus(std::int64_t plays, std::int64_t pulls);

// Two-case AFF-UCB1 bonus at time t_now: the Hoeffding width if the arm was
// observed at t_now, otherwise sqrt(s2 / w) (t_now - t_last)^(1/num_arms).
// Where the AFF variance is undefined (v <= 0) the Bernoulli maximum 1/4 is
// used. Throws std::logic_error for an arm with no observations.
double aff_ucb1_bonus(const aff::AffState& state, std::int64_t t_now,
                      std::int64_t num_arms);

// Hoeffding width of the idle-discounted quantities (w~, k~).
double aff_ucb2_bonus(const aff::AffState& state, std::int64_t t_now,
                      std::int64_t num_arms);

}  // namespace driftbandit
