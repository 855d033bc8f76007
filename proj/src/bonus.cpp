#include "driftbandit/bonus.hpp"

#include <cmath>
#include <stdexcept>

namespace driftbandit {

double hoeffding_bonus_from_ratio(double k_over_w2) {
  if (!(k_over_w2 > 0.0) || !std::isfinite(k_over_w2))
    throw std::domain_error("hoeffding_bonus: k / w^2 must be positive and finite");
  return std::sqrt(-std::log(kHoeffdingXi) * k_over_w2 / 2.0);
}

double hoeffding_bonus(double w, double k) {
  if (!(w >= 1.0) || !(k >= 1.0) || !(k <= w * w))
    throw std::domain_error("hoeffding_bonus: need w >= 1 and 1 <= k <= w^2");
  return hoeffding_bonus_from_ratio(k / (w * w));
}

double ucb_bonus(std::int64_t plays, std::int64_t pulls) {
  if (pulls < 1) throw std::domain_error("ucb_bonus: arm has no pulls");
  if (plays <= 1) return 0.0;
  return std::sqrt(2.0 * std::log(static_cast<double>(plays)) /
                   static_cast<double>(pulls));
}

double aff_ucb1_bonus(const aff::AffState& state, std::int64_t t_now,
                      std::int64_t num_arms) {
  if (state.n_obs < 1) throw std::logic_error("aff_ucb1_bonus: arm has no observations");
  // A forgetting factor of zero leaves one effective sample and no variance
  // estimate; the Bernoulli ceiling 1/4 stands in for it.
  const double s2 = state.n_obs >= 2 && state.v > 0.0 ? state.s2 : kBernoulliMaxVariance;
  const auto gap = t_now - state.t_last;
  if (gap < 0) throw std::invalid_argument("aff_ucb1_bonus: t_now precedes t_last");
  if (gap == 0) return hoeffding_bonus(state.w, state.k);
  return std::sqrt(s2 / state.w) *
         std::pow(static_cast<double>(gap), 1.0 / static_cast<double>(num_arms));
}

double aff_ucb2_bonus(const aff::AffState& state, std::int64_t t_now,
                      std::int64_t num_arms) {
  const auto d = aff::discounted_quantities(state, t_now, num_arms);
  // lambda == 0 with a positive gap sends w~ and k~ to zero together; the
  // ratio k~ / w~^2 equals k / w^2 for every positive factor.
  if (!(d.w > 0.0) || !(d.k > 0.0))
    return hoeffding_bonus_from_ratio(state.k / (state.w * state.w));
  return hoeffding_bonus_from_ratio(d.k / (d.w * d.w));
}

}  // namespace driftbandit
