#include "driftbandit/environment.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace driftbandit {
namespace {

struct KindName {
  EnvKind kind;
  std::string_view name;
};

constexpr std::array kKinds{
    KindName{EnvKind::kFixed, "fixed"},
    KindName{EnvKind::kSmallChange, "small_change"},
    KindName{EnvKind::kExponentialClock, "exponential_clock"},
    KindName{EnvKind::kReflectingWalk, "reflecting_walk"},
    KindName{EnvKind::kLogisticWalk, "logistic_walk"},
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw std::invalid_argument(field + ": " + what);
}

void require_nonempty(const std::vector<double>& v, const std::string& field) {
  require(!v.empty(), field, "needs at least one value");
}

}  // namespace

std::optional<EnvKind> env_kind(std::string_view name) {
  for (const auto& k : kKinds)
    if (k.name == name) return k.kind;
  return std::nullopt;
}

std::string_view env_name(EnvKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

void validate(const EnvSpec& spec) {
  require(spec.num_arms >= 1, "env.arms", "must be at least 1");
  switch (spec.kind) {
    case EnvKind::kFixed:
      require_nonempty(spec.means, "env.means");
      for (double m : spec.means) require(m >= 0.0 && m <= 1.0, "env.means", "must lie in [0,1]");
      break;
    case EnvKind::kSmallChange:
      require(spec.num_arms == 3, "env.arms", "small_change has exactly 3 arms");
      break;
    case EnvKind::kExponentialClock:
      require_nonempty(spec.theta, "env.theta");
      require_nonempty(spec.r_low, "env.r_low");
      require_nonempty(spec.r_high, "env.r_high");
      for (double th : spec.theta) require(th >= 0.0, "env.theta", "must be nonnegative");
      for (std::size_t a = 0; a < spec.num_arms; ++a) {
        const double lo = spec.r_low[a % spec.r_low.size()];
        const double hi = spec.r_high[a % spec.r_high.size()];
        require(lo >= 0.0 && hi <= 1.0 && lo <= hi, "env.r_low/r_high",
                "need 0 <= r_low <= r_high <= 1");
      }
      break;
    case EnvKind::kReflectingWalk:
    case EnvKind::kLogisticWalk:
      require_nonempty(spec.sigma2, "env.sigma2");
      for (double s : spec.sigma2) require(s >= 0.0, "env.sigma2", "must be nonnegative");
      break;
  }
}

EnvSpec scenario_case(int number, std::size_t num_arms) {
  EnvSpec s;
  s.num_arms = num_arms;
  switch (number) {
    case 1:
      s.kind = EnvKind::kExponentialClock;
      s.theta = {0.001, 0.010};
      s.r_low = {0.0, 0.0};
      s.r_high = {1.0, 1.0};
      break;
    case 2:
      s.kind = EnvKind::kExponentialClock;
      s.theta = {0.001, 0.010};
      s.r_low = {0.3, 0.0};
      s.r_high = {1.0, 0.7};
      break;
    case 3:
      s.kind = EnvKind::kReflectingWalk;
      s.sigma2 = {0.0001};
      break;
    case 4:
      s.kind = EnvKind::kLogisticWalk;
      s.sigma2 = {0.001};
      break;
    default:
      throw std::invalid_argument("scenario_case: cases are numbered 1-4");
  }
  return s;
}

EnvSpec small_change_scenario() {
  EnvSpec s;
  s.kind = EnvKind::kSmallChange;
  s.num_arms = 3;
  return s;
}

double reflect(double x) {
  const double folded = std::fmod(std::abs(x), 2.0);
  return folded <= 1.0 ? folded : 2.0 - folded;
}

double logistic(double z) {
  // Kept strictly inside (0,1) even where the real value rounds to an end.
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(1.0 / (1.0 + std::exp(-z)), lo, hi);
}

int sample_reward(double mu, Rng& rng) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("sample_reward: mean must lie in [0,1]");
  return uniform01(rng) < mu ? 1 : 0;
}

EnvModel::EnvModel(EnvSpec spec) : spec_(std::move(spec)), arms_(spec_.num_arms) {
  validate(spec_);
}

double EnvModel::param(const std::vector<double>& v, std::size_t arm) const {
  return v[arm % v.size()];
}

void EnvModel::initialize(Rng& rng) {
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    auto& st = arms_[a];
    st = ArmState{};
    switch (spec_.kind) {
      case EnvKind::kFixed:
        st.mu = param(spec_.means, a);
        break;
      case EnvKind::kSmallChange:
        st.mu = std::array{0.5, 0.3, 0.4}[a];
        break;
      case EnvKind::kExponentialClock:
        st.mu = std::uniform_real_distribution<double>(param(spec_.r_low, a),
                                                       param(spec_.r_high, a))(rng);
        break;
      case EnvKind::kReflectingWalk:
        st.mu = uniform01(rng);
        break;
      case EnvKind::kLogisticWalk:
        st.z = uniform01(rng);
        st.mu = logistic(st.z);
        break;
    }
  }
  initialized_ = true;
}

double EnvModel::step_mean(std::size_t arm, Rng& rng) {
  if (!initialized_) throw std::logic_error("EnvModel: initialize() must come first");
  if (arm >= arms_.size()) throw std::out_of_range("EnvModel: arm index out of range");
  auto& st = arms_[arm];
  ++st.t;
  switch (spec_.kind) {
    case EnvKind::kFixed:
      break;
    case EnvKind::kSmallChange:
      if (arm == 2) st.mu = (st.t >= kSmallChangeUp && st.t < kSmallChangeDown) ? 0.8 : 0.4;
      break;
    case EnvKind::kExponentialClock: {
      // At least one Poisson event in a unit interval.
      const double p_change = 1.0 - std::exp(-param(spec_.theta, arm));
      if (uniform01(rng) < p_change)
        st.mu = std::uniform_real_distribution<double>(param(spec_.r_low, arm),
                                                       param(spec_.r_high, arm))(rng);
      break;
    }
    case EnvKind::kReflectingWalk: {
      const double sd = std::sqrt(param(spec_.sigma2, arm));
      if (sd > 0.0) st.mu = reflect(st.mu + std::normal_distribution<double>(0.0, sd)(rng));
      break;
    }
    case EnvKind::kLogisticWalk: {
      const double sd = std::sqrt(param(spec_.sigma2, arm));
      if (sd > 0.0) st.z += std::normal_distribution<double>(0.0, sd)(rng);
      st.mu = logistic(st.z);
      break;
    }
  }
  return st.mu;
}

TrajectoryLog generate_trajectory(const EnvSpec& spec, std::int64_t horizon, Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("generate_trajectory: horizon must be positive");
  EnvModel model(spec);
  model.initialize(rng);
  TrajectoryLog log;
  log.num_arms = spec.num_arms;
  log.horizon = horizon;
  log.mu.resize(static_cast<std::size_t>(horizon) * spec.num_arms);
  for (std::int64_t t = 1; t <= horizon; ++t)
    for (std::size_t a = 0; a < spec.num_arms; ++a)
      log.mu[static_cast<std::size_t>(t - 1) * spec.num_arms + a] = model.step_mean(a, rng);
  index_optima(log);
  return log;
}

void index_optima(TrajectoryLog& log) {
  log.optimal.assign(static_cast<std::size_t>(log.horizon), 0);
  for (std::int64_t t = 1; t <= log.horizon; ++t) {
    const auto r = log.row(t);
    std::size_t best = 0;
    for (std::size_t a = 1; a < r.size(); ++a)
      if (r[a] > r[best]) best = a;
    log.optimal[static_cast<std::size_t>(t - 1)] = best;
  }
  log.switch_points = count_switch_points(log);
}

std::int64_t count_switch_points(const TrajectoryLog& log) {
  std::int64_t n = 0;
  for (std::size_t i = 1; i < log.optimal.size(); ++i)
    if (log.optimal[i] != log.optimal[i - 1]) ++n;
  return n;
}

std::uint64_t trajectory_hash(const TrajectoryLog& log) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double x : log.mu) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
      h ^= bits & 0xffU;
      h *= 0x100000001b3ULL;
      bits >>= 8;
    }
  }
  return h;
}

}  // namespace driftbandit
