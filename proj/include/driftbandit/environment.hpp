#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftbandit/rng.hpp"

namespace driftbandit {

enum class EnvKind {
  kFixed,
  kSmallChange,
  kExponentialClock,
  kReflectingWalk,
  kLogisticWalk,
};

std::optional<EnvKind> env_kind(std::string_view name);
std::string_view env_name(EnvKind kind);

// Description of an expected-reward process. Per-arm vectors are applied
// cyclically when shorter than num_arms.
struct EnvSpec {
  EnvKind kind = EnvKind::kFixed;
  std::size_t num_arms = 2;
  std::vector<double> means;   // fixed
  std::vector<double> theta;   // exponential_clock change rate
  std::vector<double> r_low;   // exponential_clock draw range
  std::vector<double> r_high;
  std::vector<double> sigma2;  // random-walk increment variance

  bool operator==(const EnvSpec&) const = default;
};

// Throws std::invalid_argument naming the offending field.
void validate(const EnvSpec& spec);

// Two-armed exponential-clock and random-walk scenarios 1-4, with the
// per-arm parameters repeated cyclically over `num_arms`.
EnvSpec scenario_case(int number, std::size_t num_arms = 2);

// Three arms at 0.5 and 0.3, the third at 0.4 jumping to 0.8 on [3000, 5000).
EnvSpec small_change_scenario();

inline constexpr std::int64_t kSmallChangeUp = 3000;
inline constexpr std::int64_t kSmallChangeDown = 5000;

// Folds the real line onto [0,1]: x' = |x| mod 2, then x' or 2 - x'.
double reflect(double x);

double logistic(double z);

// Bernoulli draw; throws std::invalid_argument unless mu lies in [0,1].
int sample_reward(double mu, Rng& rng);

// Live process with per-arm latent state.
class EnvModel {
 public:
  explicit EnvModel(EnvSpec spec);

  // Draws the initial latent state. Must precede step_mean().
  void initialize(Rng& rng);
  bool initialized() const { return initialized_; }

  // Advances one arm by one step and returns its new expected reward.
  double step_mean(std::size_t arm, Rng& rng);

  std::size_t num_arms() const { return spec_.num_arms; }
  const EnvSpec& spec() const { return spec_; }

 private:
  struct ArmState {
    double mu = 0.0;
    double z = 0.0;
    std::int64_t t = 0;
  };

  double param(const std::vector<double>& v, std::size_t arm) const;

  EnvSpec spec_;
  std::vector<ArmState> arms_;
  bool initialized_ = false;
};

// Expected rewards for t = 1..horizon, with the optimal arm per step.
struct TrajectoryLog {
  std::size_t num_arms = 0;
  std::int64_t horizon = 0;
  std::vector<double> mu;             // row-major, row t-1
  std::vector<std::size_t> optimal;   // lowest index attaining the row max
  std::int64_t switch_points = 0;

  double mean(std::int64_t t, std::size_t arm) const {
    return mu[static_cast<std::size_t>(t - 1) * num_arms + arm];
  }
  std::span<const double> row(std::int64_t t) const {
    return {mu.data() + static_cast<std::size_t>(t - 1) * num_arms, num_arms};
  }
  std::size_t optimal_arm(std::int64_t t) const { return optimal[static_cast<std::size_t>(t - 1)]; }
  double best_mean(std::int64_t t) const { return mean(t, optimal_arm(t)); }
};

TrajectoryLog generate_trajectory(const EnvSpec& spec, std::int64_t horizon, Rng& rng);

// Rebuilds the per-step optimal arms and switch count of a filled-in log.
void index_optima(TrajectoryLog& log);

// Number of steps whose optimal arm differs from the previous step's.
std::int64_t count_switch_points(const TrajectoryLog& log);

// FNV-1a over the bit patterns of the mean matrix.
std::uint64_t trajectory_hash(const TrajectoryLog& log);

}  // namespace driftbandit
