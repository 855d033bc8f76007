#include "driftbandit/aff_oracle.hpp"

#include <stdexcept>
#include <vector>

namespace driftbandit::aff {
namespace {

void check_lengths(std::span<const double> rewards, std::span<const double> lambdas) {
  if (rewards.empty()) throw std::invalid_argument("direct_mean: no rewards");
  if (lambdas.size() + 1 != rewards.size())
    throw std::invalid_argument("direct_mean: need exactly one factor fewer than rewards");
}

// weight[i] = prod_{p=i}^{t-1} (lambdas[p] + shift), each product formed
// from scratch so no recursion is shared with the estimator.
std::vector<double> weights(std::span<const double> lambdas, std::size_t n,
                            double shift, bool squared) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double prod = 1.0;
    for (std::size_t p = i; p + 1 < n; ++p) {
      const double f = lambdas[p] + shift;
      prod *= squared ? f * f : f;
    }
    out[i] = prod;
  }
  return out;
}

}  // namespace

DirectSums direct_sums(std::span<const double> rewards,
                       std::span<const double> lambdas, double shift) {
  check_lengths(rewards, lambdas);
  const auto n = rewards.size();
  const auto plain = weights(lambdas, n, shift, false);
  const auto sq = weights(lambdas, n, shift, true);
  DirectSums s{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    s.m += plain[i] * rewards[i];
    s.w += plain[i];
    s.k += sq[i];
  }
  return s;
}

double direct_mean(std::span<const double> rewards, std::span<const double> lambdas) {
  const auto s = direct_sums(rewards, lambdas);
  return s.m / s.w;
}

double direct_variance(std::span<const double> rewards,
                       std::span<const double> lambdas) {
  const auto s = direct_sums(rewards, lambdas);
  const double mu = s.m / s.w;
  const double v = s.w * (1.0 - s.k / (s.w * s.w));
  if (!(v > 0.0)) throw std::invalid_argument("direct_variance: v is not positive");
  const auto plain = weights(lambdas, rewards.size(), 0.0, false);
  double acc = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const double d = rewards[i] - mu;
    acc += plain[i] * d * d;
  }
  return acc / v;
}

}  // namespace driftbandit::aff
