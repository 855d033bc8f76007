#include "driftbandit/policy.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "factories.hpp"

namespace driftbandit {

Policy::Policy(std::size_t num_arms, std::int64_t burn_in_rounds, Rng rng)
    : num_arms_(num_arms),
      burn_in_steps_(burn_in_rounds * static_cast<std::int64_t>(num_arms)),
      rng_(std::move(rng)) {
  if (num_arms == 0) throw std::invalid_argument("policy: need at least one arm");
}

std::size_t Policy::choose(std::int64_t t) {
  if (t < 1) throw std::invalid_argument("policy: time starts at 1");
  if (pending_t_ >= 0) throw std::logic_error("policy: choose() called twice without feed()");
  std::size_t arm;
  if (t <= burn_in_steps_) {
    arm = static_cast<std::size_t>((t - 1) % static_cast<std::int64_t>(num_arms_));
  } else {
    arm = select(t);
  }
  if (arm >= num_arms_) throw std::logic_error("policy: selected arm out of range");
  pending_t_ = t;
  pending_arm_ = arm;
  return arm;
}

void Policy::feed(std::size_t arm, int reward, std::int64_t t) {
  if (t != pending_t_ || arm != pending_arm_)
    throw std::logic_error("policy: feed() must follow choose() for the same arm and time");
  pending_t_ = -1;
  update(arm, reward, t);
}

namespace {

struct Entry {
  PolicyKind kind;
  std::string_view name;
};

constexpr std::array kRegistry{
    Entry{PolicyKind::kEpsGreedy, "eps_greedy"},
    Entry{PolicyKind::kUcb, "ucb"},
    Entry{PolicyKind::kTs, "ts"},
    Entry{PolicyKind::kOts, "ots"},
    Entry{PolicyKind::kDts, "dts"},
    Entry{PolicyKind::kDUcb, "d_ucb"},
    Entry{PolicyKind::kSwUcb, "sw_ucb"},
    Entry{PolicyKind::kAffDGreedy, "aff_d_greedy"},
    Entry{PolicyKind::kAffUcb1, "aff_ucb1"},
    Entry{PolicyKind::kAffUcb2, "aff_ucb2"},
    Entry{PolicyKind::kAffTs, "aff_ts"},
    Entry{PolicyKind::kAffOts, "aff_ots"},
    Entry{PolicyKind::kAffDts1, "aff_dts1"},
    Entry{PolicyKind::kAffDts2, "aff_dts2"},
    Entry{PolicyKind::kFixedArm, "fixed_arm"},
    Entry{PolicyKind::kOracle, "oracle"},
};

using namespace std::string_view_literals;

constexpr std::array kNoKeys = std::array<std::string_view, 0>{};
constexpr std::array kEpsKeys{"epsilon"sv};
constexpr std::array kTsKeys{"alpha0"sv, "beta0"sv};
constexpr std::array kDtsKeys{"alpha0"sv, "beta0"sv, "C"sv};
constexpr std::array kDUcbKeys{"lambda_fixed"sv, "B"sv, "xi"sv};
constexpr std::array kSwUcbKeys{"W"sv, "B"sv, "xi"sv};
constexpr std::array kAffGreedyKeys{"eta"sv, "eta_mode"sv, "d"sv};
constexpr std::array kAffUcb1Keys{"eta"sv, "eta_mode"sv, "M"sv};
constexpr std::array kAffUcb2Keys{"eta"sv, "eta_mode"sv};
constexpr std::array kAffTsKeys{"eta"sv, "eta_mode"sv, "alpha0"sv, "beta0"sv};
constexpr std::array kAffDtsKeys{"eta"sv, "eta_mode"sv, "alpha0"sv, "beta0"sv, "C"sv};
constexpr std::array kFixedKeys{"arm"sv};

double parse_real(const std::string& field, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw PolicyConfigError(field, "expected a number, got '" + text + "'");
  return value;
}

std::int64_t parse_integer(const std::string& field, const std::string& text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw PolicyConfigError(field, "expected an integer, got '" + text + "'");
  return value;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw PolicyConfigError(field, what);
}

}  // namespace

std::optional<PolicyKind> policy_kind(std::string_view name) {
  for (const auto& e : kRegistry)
    if (e.name == name) return e.kind;
  return std::nullopt;
}

std::string_view policy_name(PolicyKind kind) {
  for (const auto& e : kRegistry)
    if (e.kind == kind) return e.name;
  return "unknown";
}

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : kRegistry) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

std::span<const std::string_view> policy_param_keys(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kEpsGreedy: return kEpsKeys;
    case PolicyKind::kUcb: return kNoKeys;
    case PolicyKind::kTs:
    case PolicyKind::kOts: return kTsKeys;
    case PolicyKind::kDts: return kDtsKeys;
    case PolicyKind::kDUcb: return kDUcbKeys;
    case PolicyKind::kSwUcb: return kSwUcbKeys;
    case PolicyKind::kAffDGreedy: return kAffGreedyKeys;
    case PolicyKind::kAffUcb1: return kAffUcb1Keys;
    case PolicyKind::kAffUcb2: return kAffUcb2Keys;
    case PolicyKind::kAffTs:
    case PolicyKind::kAffOts: return kAffTsKeys;
    case PolicyKind::kAffDts1:
    case PolicyKind::kAffDts2: return kAffDtsKeys;
    case PolicyKind::kFixedArm: return kFixedKeys;
    case PolicyKind::kOracle: return kNoKeys;
  }
  return kNoKeys;
}

bool is_aff(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kAffDGreedy:
    case PolicyKind::kAffUcb1:
    case PolicyKind::kAffUcb2:
    case PolicyKind::kAffTs:
    case PolicyKind::kAffOts:
    case PolicyKind::kAffDts1:
    case PolicyKind::kAffDts2: return true;
    default: return false;
  }
}

PolicyOptions resolve_options(const PolicySpec& spec) {
  const auto kind = policy_kind(spec.name);
  if (!kind) throw PolicyConfigError("policy.name", "unknown policy '" + spec.name + "'");

  PolicyOptions o;
  o.kind = *kind;
  const auto keys = policy_param_keys(o.kind);
  for (const auto& [key, text] : spec.params) {
    const std::string field = "policy." + key;
    bool known = false;
    for (auto k : keys) known = known || k == key;
    require(known, field, "not a parameter of " + spec.name);

    if (key == "epsilon") {
      o.epsilon = parse_real(field, text);
      require(o.epsilon >= 0.0 && o.epsilon <= 1.0, field, "must lie in [0,1]");
    } else if (key == "eta") {
      o.eta = parse_real(field, text);
      require(o.eta >= 0.0, field, "must be nonnegative");
    } else if (key == "eta_mode") {
      if (text == "fixed") o.eta_mode = EtaMode::kFixed;
      else if (text == "inverse_variance") o.eta_mode = EtaMode::kInverseVariance;
      else throw PolicyConfigError(field, "expected 'fixed' or 'inverse_variance'");
    } else if (key == "d") {
      o.d = parse_real(field, text);
      require(*o.d >= 0.0 && *o.d <= 1.0, field, "must lie in [0,1]");
    } else if (key == "M") {
      o.burn_in_repeats = parse_integer(field, text);
      require(o.burn_in_repeats >= 2, field, "must be at least 2 (variance needs two rewards)");
    } else if (key == "alpha0") {
      o.alpha0 = parse_real(field, text);
      require(o.alpha0 > 0.0, field, "must be positive");
    } else if (key == "beta0") {
      o.beta0 = parse_real(field, text);
      require(o.beta0 > 0.0, field, "must be positive");
    } else if (key == "C") {
      o.threshold = parse_real(field, text);
      require(*o.threshold > 0.0, field, "must be positive");
    } else if (key == "lambda_fixed") {
      if (text != "auto") {
        o.lambda_fixed = parse_real(field, text);
        require(*o.lambda_fixed > 0.0 && *o.lambda_fixed <= 1.0, field, "must lie in (0,1]");
      }
    } else if (key == "W") {
      if (text != "auto") {
        o.window = parse_integer(field, text);
        require(*o.window >= 1, field, "must be at least 1");
      }
    } else if (key == "B") {
      o.ucb.bound = parse_real(field, text);
      require(o.ucb.bound > 0.0, field, "must be positive");
    } else if (key == "xi") {
      o.ucb.xi = parse_real(field, text);
      require(o.ucb.xi > 0.0, field, "must be positive");
    } else if (key == "arm") {
      const auto arm = parse_integer(field, text);
      require(arm >= 1, field, "arms are numbered from 1");
      o.arm = static_cast<std::size_t>(arm - 1);
    }
  }

  const bool needs_c = o.kind == PolicyKind::kDts || o.kind == PolicyKind::kAffDts1 ||
                       o.kind == PolicyKind::kAffDts2;
  require(!needs_c || o.threshold.has_value(), "policy.C",
          spec.name + " needs a threshold C");
  require(!(o.eta_mode == EtaMode::kInverseVariance && o.eta == 0.0), "policy.eta",
          "inverse_variance schedule needs a positive base step");
  return o;
}

std::int64_t burn_in_rounds(const PolicyOptions& options) {
  switch (options.kind) {
    case PolicyKind::kAffUcb1: return options.burn_in_repeats;
    case PolicyKind::kFixedArm:
    case PolicyKind::kOracle: return 0;
    default: return 1;
  }
}

double d_ucb_auto_factor(std::int64_t switch_points, std::int64_t horizon) {
  return 1.0 - 0.25 * std::sqrt(static_cast<double>(switch_points) /
                                static_cast<double>(horizon));
}

std::int64_t sw_ucb_auto_window(std::int64_t switch_points, std::int64_t horizon) {
  if (switch_points <= 0) return horizon;
  const double t = static_cast<double>(horizon);
  const double w = 2.0 * std::sqrt(t * std::log(t) / static_cast<double>(switch_points));
  return std::clamp<std::int64_t>(std::llround(w), 1, horizon);
}

std::unique_ptr<Policy> make_policy(const PolicyOptions& options,
                                    const PolicyContext& context, Rng rng) {
  if (is_aff(options.kind)) return detail::make_aff_policy(options, context, std::move(rng));
  return detail::make_baseline(options, context, std::move(rng));
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const PolicyContext& context,
                                    Rng rng) {
  return make_policy(resolve_options(spec), context, std::move(rng));
}

}  // namespace driftbandit
