#include "driftbandit/aff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace driftbandit::aff {

AffState init(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("aff: step size eta must be positive, got " +
                                std::to_string(eta));
  AffState s;
  s.eta = eta;
  return s;
}

AffState frozen() {
  AffState s;
  s.eta = 0.0;
  return s;
}

void observe(AffState& state, double y, std::int64_t t) {
  if (!(y >= 0.0 && y <= 1.0))
    throw std::invalid_argument("aff: reward must lie in [0,1], got " +
                                std::to_string(y));
  if (t < 0 || (state.n_obs > 0 && t <= state.t_last))
    throw std::invalid_argument("aff: observation time " + std::to_string(t) +
                                " does not follow t_last " +
                                std::to_string(state.t_last));

  const double lam = state.lambda;
  const double m0 = state.m;
  const double w0 = state.w;
  const double k0 = state.k;
  const double v0 = state.v;
  const double s20 = state.s2;
  const bool first = state.n_obs == 0;
  const double prediction = first ? 0.0 : m0 / w0;

  double delta = 0.0;
  if (!first)
    delta = 2.0 * (prediction - y) * (state.m_dot - state.w_dot * prediction) / w0;

  state.lambda_prev = lam;
  state.lambda = std::clamp(lam - state.eta * delta, 0.0, 1.0);

  // Everything below discounts with the factor in force before this step.
  state.m_dot = lam * state.m_dot + m0;
  state.w_dot = lam * state.w_dot + w0;

  state.m = lam * m0 + y;
  state.w = lam * w0 + 1.0;
  state.k = lam * lam * k0 + 1.0;
  state.v = state.w * (1.0 - state.k / (state.w * state.w));

  if (!first && state.v > 0.0) {
    const double err = prediction - y;
    state.s2 = (lam * v0 * s20 + ((state.w - 1.0) / state.w) * err * err) / state.v;
  } else {
    state.s2 = 0.0;
  }

  ++state.n_obs;
  state.t_last = t;
}

double mean(const AffState& state) {
  if (state.n_obs < 1) throw std::logic_error("aff: mean of an empty estimator");
  return state.m / state.w;
}

double variance(const AffState& state) {
  if (state.n_obs < 2 || !(state.v > 0.0))
    throw std::logic_error("aff: variance needs two observations with v > 0");
  return state.s2;
}

Discounted discounted_quantities(const AffState& state, std::int64_t t_now,
                                 std::int64_t num_arms) {
  if (state.n_obs < 1)
    throw std::logic_error("aff: discounting an empty estimator");
  if (num_arms < 1) throw std::invalid_argument("aff: num_arms must be positive");
  if (t_now < state.t_last)
    throw std::invalid_argument("aff: t_now precedes the last observation");
  if (t_now == state.t_last) return {state.m, state.w, state.k};

  const double g = static_cast<double>(t_now - state.t_last) /
                   static_cast<double>(num_arms);
  const double f = std::pow(state.lambda, g);
  const double f2 = std::pow(state.lambda * state.lambda, g);
  return {f * state.m, f * state.w, f2 * state.k};
}

double inverse_variance_eta(const AffState& state, double base) {
  return state.s2 > 0.0 ? base / state.s2 : base;
}

}  // namespace driftbandit::aff
