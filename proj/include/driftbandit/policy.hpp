#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "driftbandit/rng.hpp"
#include "driftbandit/selection.hpp"

namespace driftbandit {

struct TrajectoryLog;

// Arm-selection strategy. Time is 1-based; choose(t) must be followed by
// exactly one feed() for the returned arm at the same t. Arms are 0-based.
//
// The first burn_in_steps() choices cycle through the arms in order.
class Policy {
 public:
  Policy(std::size_t num_arms, std::int64_t burn_in_rounds, Rng rng);
  virtual ~Policy() = default;

  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  std::size_t choose(std::int64_t t);
  void feed(std::size_t arm, int reward, std::int64_t t);

  std::size_t num_arms() const { return num_arms_; }
  std::int64_t burn_in_steps() const { return burn_in_steps_; }

  // Decision scores behind the most recent post-burn-in choice.
  std::span<const double> scores() const { return scores_; }

 protected:
  virtual std::size_t select(std::int64_t t) = 0;
  virtual void update(std::size_t arm, int reward, std::int64_t t) = 0;

  Rng& rng() { return rng_; }
  std::vector<double>& score_buffer() { return scores_; }

 private:
  std::size_t num_arms_;
  std::int64_t burn_in_steps_;
  Rng rng_;
  std::vector<double> scores_;
  std::int64_t pending_t_ = -1;
  std::size_t pending_arm_ = 0;
};

enum class PolicyKind {
  kEpsGreedy,
  kUcb,
  kTs,
  kOts,
  kDts,
  kDUcb,
  kSwUcb,
  kAffDGreedy,
  kAffUcb1,
  kAffUcb2,
  kAffTs,
  kAffOts,
  kAffDts1,
  kAffDts2,
  kFixedArm,
  kOracle,
};

enum class EtaMode { kFixed, kInverseVariance };

// Raised for a malformed policy description; `field` names the offending key.
class PolicyConfigError : public std::invalid_argument {
 public:
  PolicyConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A policy as written in a config file: registry name, display label, raw
// parameter strings, and its slot (position) used to key random streams.
struct PolicySpec {
  std::string name;
  std::string label;
  std::map<std::string, std::string> params;
  std::size_t slot = 0;

  bool operator==(const PolicySpec&) const = default;
};

// Typed, validated parameters. Unset optionals mean "derive from context".
struct PolicyOptions {
  PolicyKind kind = PolicyKind::kUcb;
  double epsilon = 0.1;
  double eta = 0.001;
  EtaMode eta_mode = EtaMode::kFixed;
  std::optional<double> d;  // defaults to eta
  std::int64_t burn_in_repeats = 10;
  double alpha0 = 2.0;
  double beta0 = 2.0;
  std::optional<double> threshold;
  std::optional<double> lambda_fixed;
  std::optional<std::int64_t> window;
  UcbConstants ucb;
  std::size_t arm = 0;

  double threshold_d() const { return d.value_or(eta); }
};

// Facts about the replication a policy is built for.
struct PolicyContext {
  std::size_t num_arms = 2;
  std::int64_t horizon = 10000;
  std::int64_t switch_points = 0;
  const TrajectoryLog* trajectory = nullptr;  // needed by `oracle` only
};

std::optional<PolicyKind> policy_kind(std::string_view name);
std::string_view policy_name(PolicyKind kind);
const std::vector<std::string>& policy_names();

// Parameter keys accepted by a policy kind.
std::span<const std::string_view> policy_param_keys(PolicyKind kind);

bool is_aff(PolicyKind kind);

// Parses and range-checks a spec. Throws PolicyConfigError.
PolicyOptions resolve_options(const PolicySpec& spec);

// Number of burn-in rounds (pulls per arm) the policy will run.
std::int64_t burn_in_rounds(const PolicyOptions& options);

// Fixed discount factor 1 - sqrt(switches / horizon) / 4.
double d_ucb_auto_factor(std::int64_t switch_points, std::int64_t horizon);

// Window size 2 sqrt(horizon ln(horizon) / switches), rounded and clamped
// to [1, horizon]; the full horizon when there are no switches.
std::int64_t sw_ucb_auto_window(std::int64_t switch_points, std::int64_t horizon);

std::unique_ptr<Policy> make_policy(const PolicyOptions& options,
                                    const PolicyContext& context, Rng rng);

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const PolicyContext& context,
                                    Rng rng);

}  // namespace driftbandit
