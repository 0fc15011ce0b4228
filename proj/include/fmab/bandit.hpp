#pragma once

#include <vector>

#include "fmab/graphs.hpp"
#include "fmab/rng.hpp"

namespace fmab {

enum class RewardKind { Bernoulli, BoundedUniform };

// Fixed reward means in [0,1] with a unique optimal arm. Exact ties for the
// argmax are rejected at construction.
class RewardModel {
 public:
  RewardModel(std::vector<double> means, RewardKind kind, double halfwidth = 0.0);

  int arm_count() const { return static_cast<int>(means_.size()); }
  double mean(int a) const { return means_[a]; }
  const std::vector<double>& means() const { return means_; }
  RewardKind kind() const { return kind_; }
  double halfwidth() const { return halfwidth_; }
  int optimal_arm() const { return optimal_arm_; }
  double optimal_mean() const { return means_[optimal_arm_]; }
  double delta_min() const { return delta_min_; }
  double gap(int a) const { return means_[optimal_arm_] - means_[a]; }

 private:
  std::vector<double> means_;
  RewardKind kind_ = RewardKind::Bernoulli;
  double halfwidth_ = 0.0;
  int optimal_arm_ = 0;
  double delta_min_ = 0.0;

  friend double sample_reward(const RewardModel& model, int a, Rng& rng);
};

// The arms selectable this round: the anchor's neighborhood plus the anchor.
struct AvailabilitySet {
  int anchor = 0;
  std::vector<int> members;  // sorted, always contains anchor
  bool contains(int a) const;
};

AvailabilitySet available_set(const Graph& g, int a_prev);

// Bernoulli draws {0,1} with mean mu(a); bounded-uniform draws uniformly on
// [mu(a)-w, mu(a)+w] clipped to [0,1].
double sample_reward(const RewardModel& model, int a, Rng& rng);

// Pseudo-regret increment mu(a*) - mu(a_t); zero iff a_t = a*.
double regret_increment(const RewardModel& model, int a_t);

}  // namespace fmab
