#include "fmab/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

GapProfile::GapProfile(std::vector<double> gaps_, double delta_) : gaps(std::move(gaps_)), delta(delta_) {
  require(!gaps.empty(), "GapProfile: no gaps");
  for (double g : gaps) require(g > 0.0 && g <= 1.0, "GapProfile: gaps must be in (0,1]");
  require(delta > 0.0 && delta < 0.5, "GapProfile: delta must be in (0,1/2)");
}

double bern_kl(double p, double q) {
  require(p >= 0.0 && p <= 1.0, "bern_kl: p must be in [0,1]");
  require(q >= 0.0 && q <= 1.0, "bern_kl: q must be in [0,1]");
  if (q == 0.0) return p == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  if (q == 1.0) return p == 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
  double kl = 0.0;
  if (p > 0.0) kl += p * std::log(p / q);
  if (p < 1.0) kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return kl;
}

double per_arm_lower_bound(double gap, double delta, bool exact) {
  require(delta > 0.0 && delta < 0.5, "per_arm_lower_bound: delta must be in (0,1/2)");
  const double confidence = bern_kl(1.0 - delta, delta);
  if (exact) {
    require(gap > 0.0 && gap < 0.5, "per_arm_lower_bound: exact form needs gap in (0,1/2)");
    const double denom = 2.0 * gap * std::log((1.0 + 2.0 * gap) / (1.0 - 2.0 * gap));
    return confidence / denom;
  }
  require(gap > 0.0 && gap <= 0.25, "per_arm_lower_bound: clean form needs gap in (0,1/4]");
  return (3.0 / 32.0) * confidence / (gap * gap);
}

double identification_time_lower_bound(const GapProfile& profile) {
  double total = 0.0;
  for (double gap : profile.gaps) {
    if (gap <= 0.25) {
      total += per_arm_lower_bound(gap, profile.delta, /*exact=*/false);
    } else if (gap < 0.5) {
      total += per_arm_lower_bound(gap, profile.delta, /*exact=*/true);
    }
    // gaps >= 1/2 fall outside the Bernoulli shift construction and
    // contribute nothing; dropping terms keeps the sum a lower bound.
  }
  return total;
}

long long traversal_lower_bound(int n) {
  require(n >= 2, "traversal_lower_bound: n must be >= 2");
  return n - 1;
}

double effective_size(const ErHetParams& params) {
  double total = 0.0;
  double sigma_min = std::numeric_limits<double>::infinity();
  for (int a = 0; a < params.n; ++a) {
    const double d = params.expected_degree(a);
    if (d <= 0.0) throw std::invalid_argument("effective_size: zero expected degree");
    total += d;
    sigma_min = std::min(sigma_min, d);
  }
  return (total + params.n) / sigma_min;
}

double visitation_lower_bound(long long t_exp, double pi_eff_value, double gamma0, int n, double delta) {
  require(t_exp >= 0, "visitation_lower_bound: t_exp must be >= 0");
  require(pi_eff_value <= 1.0, "visitation_lower_bound: pi_eff must be <= 1");
  require(gamma0 > 0.0 && gamma0 <= 1.0, "visitation_lower_bound: gamma0 must be in (0,1]");
  require(n >= 1, "visitation_lower_bound: n must be >= 1");
  require(delta > 0.0 && delta < 1.0, "visitation_lower_bound: delta must be in (0,1)");
  const double log_term = std::log(5.0 * n / delta);
  const double t = static_cast<double>(t_exp);
  return t * pi_eff_value - 2.0 / gamma0 - (std::sqrt(2.0 * t * log_term) + (2.0 / 3.0) * log_term);
}

double pi_eff(double pi0, double eps_max, double gamma0) {
  require(pi0 >= 0.0 && eps_max >= 0.0, "pi_eff: inputs must be nonnegative");
  require(gamma0 > 0.0, "pi_eff: gamma0 must be > 0");
  return pi0 - 2.0 * eps_max / gamma0;
}

double gamma_het_lower_bound(double eta, double phi_star, double sigma_min_star, double c) {
  require(eta > 0.0 && eta < 1.0, "gamma_het_lower_bound: eta must be in (0,1)");
  require(phi_star >= 0.0, "gamma_het_lower_bound: phi* must be >= 0");
  require(sigma_min_star > 0.0, "gamma_het_lower_bound: sigma*_min must be > 0");
  const double ratio = (1.0 - eta) / (1.0 + eta);
  const double denom = 1.0 + 1.0 / ((1.0 - eta) * sigma_min_star);
  return c * ratio * ratio * phi_star * phi_star / (denom * denom);
}

}  // namespace fmab
