#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "driftbandit/aff.hpp"
#include "driftbandit/rng.hpp"

namespace driftbandit {

// Index of the largest score; ties are broken uniformly at random. Random
// numbers are consumed only when a tie actually occurs.
std::size_t argmax_uniform(std::span<const double> scores, Rng& rng);

// Uniform arm with probability epsilon, otherwise the best sample mean.
std::size_t select_eps_greedy(std::span<const double> means, double epsilon, Rng& rng);

// How far the arm's forgetting factor moved at its last update, counted
// only if that update happened at `t_prev`; an arm idle at t_prev has an
// unchanged factor.
double lambda_change(const aff::AffState& state, std::int64_t t_prev);

// Best AFF mean, unless its factor moved by at least d at t_prev, in which
// case a uniform arm (possibly the same one).
std::size_t select_aff_d_greedy(std::span<const aff::AffState> states, double d,
                                std::int64_t t_prev, Rng& rng);

// argmax of mean + sqrt(2 ln plays / pulls).
std::size_t select_ucb(std::span<const double> means,
                       std::span<const std::int64_t> pulls, std::int64_t plays,
                       Rng& rng);

// Bound constants shared by the discounted and sliding-window UCB baselines.
struct UcbConstants {
  double bound = 1.0;  // reward range B
  double xi = 0.5;
};

// Per-arm reward sums and counts discounted by a fixed factor at every step.
class DiscountedCounts {
 public:
  DiscountedCounts(std::size_t num_arms, double factor);

  // Decays every arm by the factor, then credits the played arm.
  void record(std::size_t arm, int reward);

  double sum(std::size_t arm) const { return sums_[arm]; }
  double count(std::size_t arm) const { return counts_[arm]; }
  double total() const;
  double factor() const { return factor_; }
  std::size_t num_arms() const { return counts_.size(); }

 private:
  double factor_;
  std::vector<double> sums_;
  std::vector<double> counts_;
};

// Discounted mean + 2B sqrt(xi ln n / N); arms with N == 0 score +inf.
std::size_t select_d_ucb(const DiscountedCounts& counts, const UcbConstants& c, Rng& rng);

// FIFO window over the last `capacity` plays with per-arm tallies.
class SlidingWindow {
 public:
  SlidingWindow(std::size_t num_arms, std::size_t capacity);

  void push(std::size_t arm, int reward);

  std::size_t size() const { return plays_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t pulls(std::size_t arm) const { return pulls_[arm]; }
  double sum(std::size_t arm) const { return sums_[arm]; }
  std::size_t num_arms() const { return pulls_.size(); }
  const std::deque<std::pair<std::size_t, int>>& plays() const { return plays_; }

 private:
  std::size_t capacity_;
  std::deque<std::pair<std::size_t, int>> plays_;
  std::vector<std::size_t> pulls_;
  std::vector<double> sums_;
};

// Windowed mean + B sqrt(xi ln(window length) / N); absent arms score +inf.
std::size_t select_sw_ucb(const SlidingWindow& window, const UcbConstants& c, Rng& rng);

}  // namespace driftbandit
