#include "fmab/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace fmab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

PolicyConfig::PolicyConfig(long long t0_, NavigationMode mode) : t0(t0_), navigation_mode(mode) {
  require(t0 >= 1, "PolicyConfig: t0 must be >= 1");
}

AgentState::AgentState(int n_arms, int start_position)
    : position(start_position), visits(n_arms, 0), reward_sums(n_arms, 0.0) {
  require(n_arms >= 1, "AgentState: need at least one arm");
  require(start_position >= 0 && start_position < n_arms, "AgentState: start position out of range");
}

int explore_step(const AgentState& state, const AvailabilitySet& avail, Rng& rng) {
  require(state.phase == Phase::Explore, "explore_step: phase must be Explore");
  return avail.members[rng.uniform_int(static_cast<int>(avail.members.size()))];
}

void update_trackers(AgentState& state, int a, double r) {
  require(a >= 0 && a < state.arm_count(), "update_trackers: arm out of range");
  require(r >= 0.0 && r <= 1.0, "update_trackers: reward must be in [0,1]");
  state.visits[a] += 1;
  state.reward_sums[a] += r;
  state.position = a;
  state.t += 1;
}

int identify(AgentState& state) {
  require(state.phase == Phase::Explore, "identify: already identified");
  int best = 0;
  double best_mean = state.empirical_mean(0);
  for (int a = 1; a < state.arm_count(); ++a) {
    const double m = state.empirical_mean(a);
    if (m > best_mean) {
      best = a;
      best_mean = m;
    }
  }
  state.target = best;
  state.phase = Phase::Navigate;
  return best;
}

int navigate_step(AgentState& state, const AvailabilitySet& avail, NavigationMode mode,
                  const std::vector<double>* frozen_means, Rng& rng) {
  require(state.phase == Phase::Navigate, "navigate_step: phase must be Navigate");
  require(state.target.has_value(), "navigate_step: target not set");
  const int target = *state.target;
  int chosen = avail.anchor;
  switch (mode) {
    case NavigationMode::LazyWalk:
      chosen = avail.members[rng.uniform_int(static_cast<int>(avail.members.size()))];
      break;
    case NavigationMode::GreedyFrozen: {
      require(frozen_means != nullptr, "navigate_step: GreedyFrozen requires frozen means");
      chosen = avail.members.front();
      for (int a : avail.members)
        if ((*frozen_means)[a] > (*frozen_means)[chosen]) chosen = a;
      break;
    }
    case NavigationMode::WaitAtCurrent:
      chosen = avail.contains(target) ? target : avail.anchor;
      break;
  }
  if (chosen == target) state.phase = Phase::Commit;
  return chosen;
}

int commit_step(const AgentState& state) {
  require(state.phase == Phase::Commit, "commit_step: phase must be Commit");
  require(state.target.has_value(), "commit_step: target not set");
  return *state.target;
}

long long exploration_length_er(const SizingInputs& inputs) {
  require(inputs.n >= 2, "exploration_length_er: n must be >= 2");
  require(inputs.delta > 0.0 && inputs.delta < 1.0, "exploration_length_er: delta must be in (0,1)");
  require(inputs.delta_min > 0.0 && inputs.delta_min <= 1.0,
          "exploration_length_er: delta_min must be in (0,1]");
  const double n = inputs.n;
  const double mixing = inputs.c1 * n * std::log(n * static_cast<double>(inputs.horizon) / inputs.delta);
  const double id = inputs.c2 * n * std::log(n / inputs.delta) / (inputs.delta_min * inputs.delta_min);
  return static_cast<long long>(std::ceil(mixing + id));
}

MarkovSizing exploration_length_markov(const SizingInputs& inputs) {
  require(inputs.alpha.has_value() && inputs.beta.has_value(),
          "exploration_length_markov: alpha and beta required");
  const double rate = *inputs.alpha + *inputs.beta;
  require(rate > 0.0, "exploration_length_markov: alpha+beta must be > 0");
  MarkovSizing sizing;
  const double log_nt = std::log(inputs.n * static_cast<double>(inputs.horizon) / inputs.delta);
  sizing.burn_in = static_cast<long long>(std::ceil(inputs.c0 * log_nt / rate));
  sizing.t_exp = exploration_length_er(inputs);
  return sizing;
}

bool stickiness_check(int n, double alpha, double beta, double kappa) {
  require(n >= 1, "stickiness_check: n must be >= 1");
  require(kappa > 0.0, "stickiness_check: kappa must be > 0");
  (void)alpha;
  return beta <= kappa / n;
}

}  // namespace fmab
