#include "fmab/bandit.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

RewardModel::RewardModel(std::vector<double> means, RewardKind kind, double halfwidth)
    : means_(std::move(means)), kind_(kind), halfwidth_(halfwidth) {
  require(!means_.empty(), "RewardModel: no arms");
  require(halfwidth_ >= 0.0, "RewardModel: halfwidth must be >= 0");
  for (double mu : means_) require(mu >= 0.0 && mu <= 1.0, "RewardModel: means must be in [0,1]");
  optimal_arm_ = 0;
  for (int a = 1; a < arm_count(); ++a)
    if (means_[a] > means_[optimal_arm_]) optimal_arm_ = a;
  delta_min_ = 1.0;
  for (int a = 0; a < arm_count(); ++a) {
    if (a == optimal_arm_) continue;
    require(means_[a] != means_[optimal_arm_], "RewardModel: optimal arm must be unique");
    delta_min_ = std::min(delta_min_, means_[optimal_arm_] - means_[a]);
  }
  if (arm_count() == 1) delta_min_ = 1.0;
}

bool AvailabilitySet::contains(int a) const {
  return std::binary_search(members.begin(), members.end(), a);
}

AvailabilitySet available_set(const Graph& g, int a_prev) {
  if (a_prev < 0 || a_prev >= g.node_count()) throw std::invalid_argument("available_set: arm out of range");
  AvailabilitySet avail;
  avail.anchor = a_prev;
  avail.members = g.neighbors(a_prev);
  avail.members.insert(std::lower_bound(avail.members.begin(), avail.members.end(), a_prev), a_prev);
  return avail;
}

double sample_reward(const RewardModel& model, int a, Rng& rng) {
  if (a < 0 || a >= model.arm_count()) throw std::invalid_argument("sample_reward: arm out of range");
  const double mu = model.mean(a);
  switch (model.kind()) {
    case RewardKind::Bernoulli:
      return rng.bernoulli(mu) ? 1.0 : 0.0;
    case RewardKind::BoundedUniform: {
      const double r = rng.uniform_range(mu - model.halfwidth_, mu + model.halfwidth_);
      return std::clamp(r, 0.0, 1.0);
    }
  }
  return 0.0;
}

double regret_increment(const RewardModel& model, int a_t) {
  if (a_t < 0 || a_t >= model.arm_count()) throw std::invalid_argument("regret_increment: arm out of range");
  return model.optimal_mean() - model.mean(a_t);
}

}  // namespace fmab
