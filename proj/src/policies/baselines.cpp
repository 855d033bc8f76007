#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "driftbandit/bonus.hpp"
#include "driftbandit/environment.hpp"
#include "driftbandit/posterior.hpp"
#include "factories.hpp"

namespace driftbandit::detail {
namespace {

// Incremental per-arm sample means.
class SampleMeans {
 public:
  explicit SampleMeans(std::size_t num_arms) : means_(num_arms, 0.0), pulls_(num_arms, 0) {}

  void add(std::size_t arm, int reward) {
    ++pulls_[arm];
    means_[arm] += (reward - means_[arm]) / static_cast<double>(pulls_[arm]);
  }

  std::span<const double> means() const { return means_; }
  std::span<const std::int64_t> pulls() const { return pulls_; }

 private:
  std::vector<double> means_;
  std::vector<std::int64_t> pulls_;
};

class EpsGreedy final : public Policy {
 public:
  EpsGreedy(std::size_t arms, double epsilon, Rng rng)
      : Policy(arms, 1, std::move(rng)), epsilon_(epsilon), stats_(arms) {}

 protected:
  std::size_t select(std::int64_t) override {
    auto& s = score_buffer();
    s.assign(stats_.means().begin(), stats_.means().end());
    return select_eps_greedy(stats_.means(), epsilon_, rng());
  }
  void update(std::size_t arm, int reward, std::int64_t) override { stats_.add(arm, reward); }

 private:
  double epsilon_;
  SampleMeans stats_;
};

class Ucb final : public Policy {
 public:
  Ucb(std::size_t arms, Rng rng) : Policy(arms, 1, std::move(rng)), stats_(arms) {}

 protected:
  std::size_t select(std::int64_t t) override {
    const auto plays = t - 1;
    auto& s = score_buffer();
    s.resize(num_arms());
    for (std::size_t a = 0; a < num_arms(); ++a)
      s[a] = stats_.means()[a] + ucb_bonus(plays, stats_.pulls()[a]);
    return select_ucb(stats_.means(), stats_.pulls(), plays, rng());
  }
  void update(std::size_t arm, int reward, std::int64_t) override { stats_.add(arm, reward); }

 private:
  SampleMeans stats_;
};

// Beta-Bernoulli Thompson sampling with optional optimism (sample floored
// at the posterior mean) and optional dynamic threshold.
class Thompson final : public Policy {
 public:
  Thompson(std::size_t arms, BetaParams prior, bool optimistic,
           std::optional<double> threshold, Rng rng)
      : Policy(arms, 1, std::move(rng)),
        posteriors_(arms, prior),
        optimistic_(optimistic),
        threshold_(threshold) {}

 protected:
  std::size_t select(std::int64_t) override {
    auto& s = score_buffer();
    s.resize(num_arms());
    for (std::size_t a = 0; a < num_arms(); ++a) {
      const auto& p = posteriors_[a];
      double x = sample_beta(rng(), p.alpha, p.beta);
      if (optimistic_) x = std::max(x, p.mean());
      s[a] = x;
    }
    return argmax_uniform(s, rng());
  }

  void update(std::size_t arm, int reward, std::int64_t) override {
    posteriors_[arm] = threshold_ ? dts_update(posteriors_[arm], reward, *threshold_)
                                  : ts_update(posteriors_[arm], true, reward);
  }

 private:
  std::vector<BetaParams> posteriors_;
  bool optimistic_;
  std::optional<double> threshold_;
};

class DiscountedUcb final : public Policy {
 public:
  DiscountedUcb(std::size_t arms, double factor, UcbConstants c, Rng rng)
      : Policy(arms, 1, std::move(rng)), counts_(arms, factor), c_(c) {}

 protected:
  std::size_t select(std::int64_t) override { return select_d_ucb(counts_, c_, rng()); }
  void update(std::size_t arm, int reward, std::int64_t) override { counts_.record(arm, reward); }

 private:
  DiscountedCounts counts_;
  UcbConstants c_;
};

class SlidingWindowUcb final : public Policy {
 public:
  SlidingWindowUcb(std::size_t arms, std::size_t window, UcbConstants c, Rng rng)
      : Policy(arms, 1, std::move(rng)), window_(arms, window), c_(c) {}

 protected:
  std::size_t select(std::int64_t) override { return select_sw_ucb(window_, c_, rng()); }
  void update(std::size_t arm, int reward, std::int64_t) override { window_.push(arm, reward); }

 private:
  SlidingWindow window_;
  UcbConstants c_;
};

class FixedArm final : public Policy {
 public:
  FixedArm(std::size_t arms, std::size_t arm, Rng rng) : Policy(arms, 0, std::move(rng)), arm_(arm) {
    if (arm >= arms) throw PolicyConfigError("policy.arm", "arm index exceeds the arm count");
  }

 protected:
  std::size_t select(std::int64_t) override { return arm_; }
  void update(std::size_t, int, std::int64_t) override {}

 private:
  std::size_t arm_;
};

// Plays the arm with the highest true mean; regret is zero by construction.
class Oracle final : public Policy {
 public:
  Oracle(std::size_t arms, const TrajectoryLog* log, Rng rng)
      : Policy(arms, 0, std::move(rng)), log_(log) {
    if (log == nullptr) throw std::invalid_argument("oracle policy needs the trajectory");
  }

 protected:
  std::size_t select(std::int64_t t) override { return log_->optimal_arm(t); }
  void update(std::size_t, int, std::int64_t) override {}

 private:
  const TrajectoryLog* log_;
};

}  // namespace

std::unique_ptr<Policy> make_baseline(const PolicyOptions& o, const PolicyContext& ctx,
                                      Rng rng) {
  const auto arms = ctx.num_arms;
  const BetaParams prior{o.alpha0, o.beta0};
  switch (o.kind) {
    case PolicyKind::kEpsGreedy:
      return std::make_unique<EpsGreedy>(arms, o.epsilon, std::move(rng));
    case PolicyKind::kUcb:
      return std::make_unique<Ucb>(arms, std::move(rng));
    case PolicyKind::kTs:
      return std::make_unique<Thompson>(arms, prior, false, std::nullopt, std::move(rng));
    case PolicyKind::kOts:
      return std::make_unique<Thompson>(arms, prior, true, std::nullopt, std::move(rng));
    case PolicyKind::kDts:
      return std::make_unique<Thompson>(arms, prior, false, o.threshold, std::move(rng));
    case PolicyKind::kDUcb: {
      const double factor =
          o.lambda_fixed.value_or(d_ucb_auto_factor(ctx.switch_points, ctx.horizon));
      return std::make_unique<DiscountedUcb>(arms, factor, o.ucb, std::move(rng));
    }
    case PolicyKind::kSwUcb: {
      const auto window = o.window.value_or(sw_ucb_auto_window(ctx.switch_points, ctx.horizon));
      return std::make_unique<SlidingWindowUcb>(arms, static_cast<std::size_t>(window), o.ucb,
                                                std::move(rng));
    }
    case PolicyKind::kFixedArm:
      return std::make_unique<FixedArm>(arms, o.arm, std::move(rng));
    case PolicyKind::kOracle:
      return std::make_unique<Oracle>(arms, ctx.trajectory, std::move(rng));
    default:
      break;
  }
  throw std::logic_error("make_baseline: not a baseline policy");
}

}  // namespace driftbandit::detail
