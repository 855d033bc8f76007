#include "driftbandit/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace driftbandit {

BetaParams ts_update(BetaParams params, bool selected, int reward) {
  if (!selected) return params;
  if (reward != 0 && reward != 1)
    throw std::invalid_argument("ts_update: reward must be 0 or 1");
  params.alpha += reward;
  params.beta += 1 - reward;
  return params;
}

BetaParams aff_ts_update(double alpha0, double beta0, const aff::AffState& state,
                         std::int64_t t_now, std::int64_t num_arms) {
  const auto d = aff::discounted_quantities(state, t_now, num_arms);
  return {alpha0 + d.m, beta0 + (d.w - d.m)};
}

BetaParams dts_update(BetaParams params, int reward, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("dts_update: C must be positive");
  if (reward != 0 && reward != 1)
    throw std::invalid_argument("dts_update: reward must be 0 or 1");
  if (params.alpha + params.beta < threshold) return ts_update(params, true, reward);
  const double scale = threshold / (threshold + 1.0);
  return {(params.alpha + reward) * scale, (params.beta + 1 - reward) * scale};
}

double aff_dts_threshold(DtsVariant variant, const aff::AffState& state,
                         double initial) {
  double c = 0.0;
  switch (variant) {
    case DtsVariant::kInverseVariance:
      c = state.s2 > 0.0 ? 4.0 / state.s2 - 1.0 : 0.0;
      break;
    case DtsVariant::kWeightSum:
      c = state.w - 1.0;
      break;
  }
  return (c > 0.0 && std::isfinite(c)) ? c : initial;
}

}  // namespace driftbandit
