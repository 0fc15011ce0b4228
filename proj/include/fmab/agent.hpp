#pragma once

#include <optional>
#include <vector>

#include "fmab/bandit.hpp"
#include "fmab/rng.hpp"

namespace fmab {

enum class Phase { Explore, Navigate, Commit };

enum class NavigationMode { LazyWalk, GreedyFrozen, WaitAtCurrent };

struct PolicyConfig {
  long long t0 = 1;  // exploration length
  NavigationMode navigation_mode = NavigationMode::LazyWalk;
  PolicyConfig() = default;
  PolicyConfig(long long t0_, NavigationMode mode);
};

// Per-episode learner state: position, phase, visit counts, reward sums and
// (after identification) the committed target. Phase only ever advances
// Explore -> Navigate -> Commit.
struct AgentState {
  int position = 0;
  Phase phase = Phase::Explore;
  std::vector<long long> visits;
  std::vector<double> reward_sums;
  std::optional<int> target;
  long long t = 0;  // completed rounds

  AgentState(int n_arms, int start_position);
  int arm_count() const { return static_cast<int>(visits.size()); }
  double empirical_mean(int a) const {
    return visits[a] > 0 ? reward_sums[a] / static_cast<double>(visits[a]) : 0.0;
  }
};

// Uniform draw from the availability set (the lazy-walk exploration policy).
int explore_step(const AgentState& state, const AvailabilitySet& avail, Rng& rng);

// visits(a) += 1, reward_sums(a) += r, position = a, t += 1.
void update_trackers(AgentState& state, int a, double r);

// argmax of empirical means with unvisited arms scoring exactly 0; ties break
// to the lowest index. Sets the target and moves the phase to Navigate.
int identify(AgentState& state);

// One navigation round. LazyWalk keeps drawing uniformly from the availability
// set; GreedyFrozen takes the argmax of the frozen means over the set (ties to
// the lowest index); WaitAtCurrent returns the target when available and
// otherwise holds the anchor. The phase moves to Commit when the returned arm
// is the target. GreedyFrozen requires frozen_means.
int navigate_step(AgentState& state, const AvailabilitySet& avail, NavigationMode mode,
                  const std::vector<double>* frozen_means, Rng& rng);

// Deterministically replays the target (always available from itself).
int commit_step(const AgentState& state);

struct SizingInputs {
  int n = 2;
  long long horizon = 1;
  double delta = 0.1;
  double delta_min = 1.0;
  std::optional<double> alpha;
  std::optional<double> beta;
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

struct MarkovSizing {
  long long burn_in = 0;
  long long t_exp = 0;
};

// ceil(c1 n ln(nT/delta) + c2 n ln(n/delta) / delta_min^2)
long long exploration_length_er(const SizingInputs& inputs);

// burn_in = ceil(c0 ln(nT/delta)/(alpha+beta)); t_exp as in the ER sizing.
MarkovSizing exploration_length_markov(const SizingInputs& inputs);

// true iff beta <= kappa/n. Advisory: violations mean the walk may not mix
// faster than the graph rewires.
bool stickiness_check(int n, double alpha, double beta, double kappa);

}  // namespace fmab
