#include "driftbandit/selection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace driftbandit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Counts below this are treated as fully forgotten (avoids denormals for
// strong discounting over long idle stretches).
constexpr double kForgotten = 1e-300;

}  // namespace

std::size_t argmax_uniform(std::span<const double> scores, Rng& rng) {
  if (scores.empty()) throw std::invalid_argument("argmax_uniform: no scores");
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
      ties = 1;
    } else if (scores[i] == scores[best]) {
      ++ties;
      if (uniform_index(rng, ties) == 0) best = i;
    }
  }
  return best;
}

std::size_t select_eps_greedy(std::span<const double> means, double epsilon, Rng& rng) {
  if (uniform01(rng) < epsilon) return uniform_index(rng, means.size());
  return argmax_uniform(means, rng);
}

double lambda_change(const aff::AffState& state, std::int64_t t_prev) {
  if (state.n_obs == 0 || state.t_last != t_prev) return 0.0;
  return std::abs(state.lambda - state.lambda_prev);
}

std::size_t select_aff_d_greedy(std::span<const aff::AffState> states, double d,
                                std::int64_t t_prev, Rng& rng) {
  std::vector<double> means(states.size());
  for (std::size_t a = 0; a < states.size(); ++a) means[a] = aff::mean(states[a]);
  const auto best = argmax_uniform(means, rng);
  if (lambda_change(states[best], t_prev) >= d) return uniform_index(rng, states.size());
  return best;
}

std::size_t select_ucb(std::span<const double> means,
                       std::span<const std::int64_t> pulls, std::int64_t plays,
                       Rng& rng) {
  std::vector<double> scores(means.size());
  for (std::size_t a = 0; a < means.size(); ++a)
    scores[a] = means[a] + std::sqrt(2.0 * std::log(static_cast<double>(plays)) /
                                     static_cast<double>(pulls[a]));
  return argmax_uniform(scores, rng);
}

DiscountedCounts::DiscountedCounts(std::size_t num_arms, double factor)
    : factor_(factor), sums_(num_arms, 0.0), counts_(num_arms, 0.0) {
  if (!(factor > 0.0 && factor <= 1.0))
    throw std::invalid_argument("DiscountedCounts: factor must lie in (0,1]");
}

void DiscountedCounts::record(std::size_t arm, int reward) {
  if (factor_ != 1.0) {
    for (std::size_t a = 0; a < counts_.size(); ++a) {
      sums_[a] *= factor_;
      counts_[a] *= factor_;
      if (counts_[a] < kForgotten) sums_[a] = counts_[a] = 0.0;
    }
  }
  sums_[arm] += reward;
  counts_[arm] += 1.0;
}

double DiscountedCounts::total() const {
  double n = 0.0;
  for (double c : counts_) n += c;
  return n;
}

std::size_t select_d_ucb(const DiscountedCounts& counts, const UcbConstants& c, Rng& rng) {
  const double log_n = std::log(counts.total());
  std::vector<double> scores(counts.num_arms());
  for (std::size_t a = 0; a < scores.size(); ++a) {
    const double n = counts.count(a);
    scores[a] = n > 0.0 ? counts.sum(a) / n + 2.0 * c.bound * std::sqrt(c.xi * log_n / n)
                        : kInf;
  }
  return argmax_uniform(scores, rng);
}

SlidingWindow::SlidingWindow(std::size_t num_arms, std::size_t capacity)
    : capacity_(capacity), pulls_(num_arms, 0), sums_(num_arms, 0.0) {
  if (capacity == 0) throw std::invalid_argument("SlidingWindow: capacity must be positive");
}

void SlidingWindow::push(std::size_t arm, int reward) {
  if (plays_.size() == capacity_) {
    const auto [old_arm, old_reward] = plays_.front();
    plays_.pop_front();
    --pulls_[old_arm];
    sums_[old_arm] -= old_reward;
  }
  plays_.emplace_back(arm, reward);
  ++pulls_[arm];
  sums_[arm] += reward;
}

std::size_t select_sw_ucb(const SlidingWindow& window, const UcbConstants& c, Rng& rng) {
  const double log_n = std::log(static_cast<double>(window.size()));
  std::vector<double> scores(window.num_arms());
  for (std::size_t a = 0; a < scores.size(); ++a) {
    const auto n = static_cast<double>(window.pulls(a));
    scores[a] = n > 0.0 ? window.sum(a) / n + c.bound * std::sqrt(c.xi * log_n / n) : kInf;
  }
  return argmax_uniform(scores, rng);
}

}  // namespace driftbandit
