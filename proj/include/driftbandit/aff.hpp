#pragma once

#include <cstdint>
#include <span>

namespace driftbandit::aff {

// Adaptive-forgetting-factor estimator of one reward stream.
//
// `lambda` is the factor that will discount the next observation; after
// each observation it takes a single projected gradient step on the
// one-step-ahead squared prediction error. All fields stay untouched while
// the stream is idle.
struct AffState {
  double lambda = 1.0;
  double lambda_prev = 1.0;
  double m = 0.0;      // weighted reward sum
  double w = 0.0;      // weight sum
  double k = 0.0;      // squared-weight sum
  double m_dot = 0.0;  // d m / d lambda
  double w_dot = 0.0;  // d w / d lambda
  double s2 = 0.0;     // adaptive variance
  double v = 0.0;      // variance normaliser, w (1 - k / w^2)
  std::int64_t n_obs = 0;
  std::int64_t t_last = 0;
  double eta = 0.001;

  bool operator==(const AffState&) const = default;
};

// Empty estimator. Throws std::invalid_argument unless eta > 0.
AffState init(double eta);

// Estimator with eta == 0: lambda stays at 1 and the mean is the sample mean.
AffState frozen();

// Feeds reward y observed at global time t. Throws std::invalid_argument
// for y outside [0,1] or t not after the previous observation.
void observe(AffState& state, double y, std::int64_t t);

// m / w. Throws std::logic_error on an empty estimator.
double mean(const AffState& state);

// s2. Throws std::logic_error before two observations (v == 0).
double variance(const AffState& state);

struct Discounted {
  double m;
  double w;
  double k;
};

// Applies lambda^((t_now - t_last) / num_arms) to m and w, and the squared
// factor to k. The exponent is real-valued; a zero gap is the identity.
Discounted discounted_quantities(const AffState& state, std::int64_t t_now,
                                 std::int64_t num_arms);

// Step size for the inverse-variance schedule: base / s2, or base when s2 is 0.
double inverse_variance_eta(const AffState& state, double base);

}  // namespace driftbandit::aff
