#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "driftbandit/aff.hpp"
#include "driftbandit/bonus.hpp"
#include "driftbandit/posterior.hpp"
#include "factories.hpp"

namespace driftbandit::detail {
namespace {

// Shared per-arm AFF estimators. Unplayed arms keep their state untouched.
class AffPolicy : public Policy {
 public:
  AffPolicy(std::size_t arms, std::int64_t burn_in, const PolicyOptions& o, Rng rng)
      : Policy(arms, burn_in, std::move(rng)),
        base_eta_(o.eta),
        mode_(o.eta_mode),
        states_(arms, o.eta > 0.0 ? aff::init(o.eta) : aff::frozen()) {}

  std::span<const aff::AffState> states() const { return states_; }

 protected:
  void update(std::size_t arm, int reward, std::int64_t t) override {
    auto& s = states_[arm];
    if (mode_ == EtaMode::kInverseVariance) s.eta = aff::inverse_variance_eta(s, base_eta_);
    aff::observe(s, reward, t);
    after_observe(arm, reward);
  }

  virtual void after_observe(std::size_t, int) {}

  std::int64_t arm_count() const { return static_cast<std::int64_t>(num_arms()); }

 private:
  double base_eta_;
  EtaMode mode_;
  std::vector<aff::AffState> states_;
};

class AffDGreedy final : public AffPolicy {
 public:
  AffDGreedy(std::size_t arms, const PolicyOptions& o, Rng rng)
      : AffPolicy(arms, 1, o, std::move(rng)), d_(o.threshold_d()) {}

 protected:
  std::size_t select(std::int64_t t) override {
    auto& s = score_buffer();
    s.resize(num_arms());
    for (std::size_t a = 0; a < num_arms(); ++a) s[a] = aff::mean(states()[a]);
    return select_aff_d_greedy(states(), d_, t - 1, rng());
  }

 private:
  double d_;
};

// Upper bound with either the two-case idle inflation or the discounted
// Hoeffding width.
class AffUcb final : public AffPolicy {
 public:
  AffUcb(std::size_t arms, std::int64_t burn_in, bool discounted, const PolicyOptions& o,
         Rng rng)
      : AffPolicy(arms, burn_in, o, std::move(rng)), discounted_(discounted) {}

 protected:
  std::size_t select(std::int64_t t) override {
    auto& s = score_buffer();
    s.resize(num_arms());
    for (std::size_t a = 0; a < num_arms(); ++a) {
      const auto& st = states()[a];
      const double bonus = discounted_ ? aff_ucb2_bonus(st, t - 1, arm_count())
                                       : aff_ucb1_bonus(st, t - 1, arm_count());
      s[a] = aff::mean(st) + bonus;
    }
    return argmax_uniform(s, rng());
  }

 private:
  bool discounted_;
};

class AffThompson final : public AffPolicy {
 public:
  AffThompson(std::size_t arms, bool optimistic, const PolicyOptions& o, Rng rng)
      : AffPolicy(arms, 1, o, std::move(rng)),
        alpha0_(o.alpha0),
        beta0_(o.beta0),
        optimistic_(optimistic) {}

 protected:
  std::size_t select(std::int64_t t) override {
    auto& s = score_buffer();
    s.resize(num_arms());
    for (std::size_t a = 0; a < num_arms(); ++a) {
      const auto p = aff_ts_update(alpha0_, beta0_, states()[a], t - 1, arm_count());
      double x = sample_beta(rng(), p.alpha, p.beta);
      if (optimistic_) x = std::max(x, p.mean());
      s[a] = x;
    }
    return argmax_uniform(s, rng());
  }

 private:
  double alpha0_;
  double beta0_;
  bool optimistic_;
};

// Dynamic TS whose threshold is re-tuned from the played arm's AFF state
// after every observation.
class AffDts final : public AffPolicy {
 public:
  AffDts(std::size_t arms, DtsVariant variant, const PolicyOptions& o, Rng rng)
      : AffPolicy(arms, 1, o, std::move(rng)),
        variant_(variant),
        initial_(o.threshold.value()),
        posteriors_(arms, BetaParams{o.alpha0, o.beta0}) {}

 protected:
  std::size_t select(std::int64_t) override {
    auto& s = score_buffer();
    s.resize(num_arms());
    for (std::size_t a = 0; a < num_arms(); ++a)
      s[a] = sample_beta(rng(), posteriors_[a].alpha, posteriors_[a].beta);
    return argmax_uniform(s, rng());
  }

  void after_observe(std::size_t arm, int reward) override {
    const double c = aff_dts_threshold(variant_, states()[arm], initial_);
    posteriors_[arm] = dts_update(posteriors_[arm], reward, c);
  }

 private:
  DtsVariant variant_;
  double initial_;
  std::vector<BetaParams> posteriors_;
};

}  // namespace

std::unique_ptr<Policy> make_aff_policy(const PolicyOptions& o, const PolicyContext& ctx,
                                        Rng rng) {
  const auto arms = ctx.num_arms;
  switch (o.kind) {
    case PolicyKind::kAffDGreedy:
      return std::make_unique<AffDGreedy>(arms, o, std::move(rng));
    case PolicyKind::kAffUcb1:
      return std::make_unique<AffUcb>(arms, o.burn_in_repeats, false, o, std::move(rng));
    case PolicyKind::kAffUcb2:
      return std::make_unique<AffUcb>(arms, 1, true, o, std::move(rng));
    case PolicyKind::kAffTs:
      return std::make_unique<AffThompson>(arms, false, o, std::move(rng));
    case PolicyKind::kAffOts:
      return std::make_unique<AffThompson>(arms, true, o, std::move(rng));
    case PolicyKind::kAffDts1:
      return std::make_unique<AffDts>(arms, DtsVariant::kInverseVariance, o, std::move(rng));
    case PolicyKind::kAffDts2:
      return std::make_unique<AffDts>(arms, DtsVariant::kWeightSum, o, std::move(rng));
    default:
      break;
  }
  throw std::logic_error("make_aff_policy: not an AFF policy");
}

}  // namespace driftbandit::detail
