#pragma once

#include <vector>

#include "fmab/graphs.hpp"

namespace fmab {

struct GapProfile {
  std::vector<double> gaps;  // Delta(a) for each suboptimal arm, in (0,1]
  double delta = 0.1;        // confidence parameter in (0, 1/2)
  GapProfile(std::vector<double> gaps_, double delta_);
};

// Binary KL divergence kl(p,q) = p log(p/q) + (1-p) log((1-p)/(1-q)) in nats,
// with the 0 log 0 = 0 convention. q in {0,1} with p != q yields +infinity.
double bern_kl(double p, double q);

// Fixed-confidence sample floor for one suboptimal arm. Exact form evaluates
// kl(1-delta,delta) / (2 Delta log((1+2 Delta)/(1-2 Delta))); the clean form
// is (3/32) kl(1-delta,delta) / Delta^2, valid for Delta <= 1/4.
double per_arm_lower_bound(double gap, double delta, bool exact);

// Sum of per-arm floors over the suboptimal arms. Each arm uses the clean
// form when its gap is <= 1/4 and the exact form for gaps in (1/4, 1/2);
// larger gaps contribute zero (still a valid lower bound).
double identification_time_lower_bound(const GapProfile& profile);

// Worst-case rounds to visit all arms under local moves: n - 1, realized by
// the line availability process L_t(i) = {i, i+1}.
long long traversal_lower_bound(int n);

// n_eff = (sum_j d_j* + n) / sigma*_min for a heterogeneous profile.
double effective_size(const ErHetParams& params);

// t_exp * pi_eff - 2/gamma0 - (sqrt(2 t_exp log(5n/delta)) + (2/3) log(5n/delta)).
// May be negative; the caller interprets.
double visitation_lower_bound(long long t_exp, double pi_eff, double gamma0, int n, double delta);

// pi0 - 2 eps_max / gamma0 (negative means the stickiness condition fails).
double pi_eff(double pi0, double eps_max, double gamma0);

// Heterogeneous spectral-gap floor: c ((1-eta)/(1+eta))^2 phi*^2 /
// (1 + 1/((1-eta) sigma*_min))^2. A formula evaluator, not a claim about
// realized graphs.
double gamma_het_lower_bound(double eta, double phi_star, double sigma_min_star, double c = 1.0);

}  // namespace fmab
