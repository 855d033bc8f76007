#pragma once

#include <span>

namespace driftbandit::aff {

// Direct (non-recursive) evaluation of the forgetting-factor sums, used as
// an independent check on the recursive estimator.
//
// `lambdas[p]` discounts every reward up to and including rewards[p], so
// lambdas.size() must equal rewards.size() - 1. `shift` is added to every
// factor, which lets callers take finite differences in lambda.
struct DirectSums {
  double m;  // sum_i (prod_{p=i}^{t-1} lambda_p) y_i
  double w;  // sum_i  prod_{p=i}^{t-1} lambda_p
  double k;  // sum_i  prod_{p=i}^{t-1} lambda_p^2
};

DirectSums direct_sums(std::span<const double> rewards,
                       std::span<const double> lambdas, double shift = 0.0);

// Weighted mean m / w of the direct sums. Throws std::invalid_argument on
// empty rewards or a length mismatch.
double direct_mean(std::span<const double> rewards, std::span<const double> lambdas);

// (1 / v) sum_i (prod lambda_p) (y_i - mean)^2 with v = w (1 - k / w^2).
double direct_variance(std::span<const double> rewards,
                       std::span<const double> lambdas);

}  // namespace driftbandit::aff
