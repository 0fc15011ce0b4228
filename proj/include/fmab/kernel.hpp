#pragma once

#include <Eigen/Dense>

#include "fmab/graphs.hpp"

namespace fmab {

// Probability distribution over nodes; entries >= 0 and sum to 1 within 1e-12.
struct Distribution {
  Eigen::VectorXd mass;
  explicit Distribution(Eigen::VectorXd m);
  static Distribution point_mass(int n, int i);
  static Distribution uniform(int n);
  int size() const { return static_cast<int>(mass.size()); }
};

// Row-stochastic lazy-walk transition matrix. Rows sum to 1 within 1e-12,
// every diagonal entry is at least 1/n, and off-diagonal support is the
// source graph's edge set.
struct Kernel {
  Eigen::MatrixXd rows;
  explicit Kernel(Eigen::MatrixXd w);
  int size() const { return static_cast<int>(rows.rows()); }
};

struct DriftMetrics {
  double kernel_drift = 0.0;      // Frobenius norm, upper bound on the operator norm
  double stationary_drift = 0.0;  // TV distance between consecutive stationary laws
  double spectral_gap_prev = 0.0;
  double spectral_gap_next = 0.0;
};

struct SpectrumReport {
  double gamma = 0.0;       // 1 - lambda2
  double lambda2 = 0.0;     // second-largest eigenvalue
  double lambda_min = 0.0;  // smallest eigenvalue, reported for the absolute gap
};

// W(i,j) = 1/(d(i)+1) for j = i or {i,j} an edge, else 0.
Kernel lazy_kernel(const Graph& g);

// pi(i) = (d(i)+1)/(2|E|+n); reversing measure of lazy_kernel(g).
Distribution stationary_law(const Graph& g);

// gamma = 1 - lambda2 of the pi-symmetrized kernel D^{1/2} W D^{-1/2}.
// Requires detailed balance pi(i)W(i,j) = pi(j)W(j,i) within 1e-8.
double spectral_gap(const Kernel& k, const Distribution& pi);
SpectrumReport spectrum_report(const Kernel& k, const Distribution& pi);

// Expected uniform-move kernel of the homogeneous ER process:
// diagonal (1-(1-p)^n)/(np), off-diagonal (np-1+(1-p)^n)/(np(n-1)).
Kernel hom_expected_kernel(int n, double p);

// (1-(1-p)^n-p)/(p(n-1)); the n-1 non-unit eigenvalues of hom_expected_kernel.
double hom_lambda2(int n, double p);

// Doeblin constant (np-1+(1-p)^n)/(p(n-1)); equals 1 - hom_lambda2.
double minorization_constant(int n, double p);

// Frobenius norm of the difference (the proof route's upper bound on the
// operator norm). kernel_drift_operator gives the exact spectral norm and is
// meant for n <= ~500.
double kernel_drift(const Kernel& k_prev, const Kernel& k_next);
double kernel_drift_operator(const Kernel& k_prev, const Kernel& k_next);

double tv_distance(const Distribution& a, const Distribution& b);

// nu' = nu W, exact propagation.
Distribution propagate_law(const Distribution& nu, const Kernel& k);

// Exact chain conductance: min over nonempty S with pi(S) <= 1/2 of
// |dS| / sum_{i in S}(d(i)+1). Subset enumeration; n <= 24.
double cheeger_conductance(const Graph& g);

// Population conductance phi* of a heterogeneous profile: min over S with
// 0 < Vol_P(S) <= Vol_P(A)/2 of Phi_P(S)/Vol_P(S). Enumeration; n <= 24.
double population_conductance(const ErHetParams& params);

}  // namespace fmab
