#include "fmab/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fmab/errors.hpp"

namespace fmab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

constexpr double kSumTolerance = 1e-12;
constexpr double kDetailedBalanceTolerance = 1e-8;
constexpr int kEnumerationCap = 24;

}  // namespace

Distribution::Distribution(Eigen::VectorXd m) : mass(std::move(m)) {
  require(mass.size() >= 1, "Distribution: empty");
  require(mass.minCoeff() >= 0.0, "Distribution: negative mass");
  require(std::abs(mass.sum() - 1.0) <= kSumTolerance, "Distribution: mass must sum to 1");
}

Distribution Distribution::point_mass(int n, int i) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  m(i) = 1.0;
  return Distribution(std::move(m));
}

Distribution Distribution::uniform(int n) {
  return Distribution(Eigen::VectorXd::Constant(n, 1.0 / n));
}

Kernel::Kernel(Eigen::MatrixXd w) : rows(std::move(w)) {
  require(rows.rows() == rows.cols() && rows.rows() >= 1, "Kernel: must be square");
  const int n = static_cast<int>(rows.rows());
  for (int i = 0; i < n; ++i) {
    require(std::abs(rows.row(i).sum() - 1.0) <= kSumTolerance, "Kernel: rows must sum to 1");
    require(rows(i, i) >= 1.0 / n - kSumTolerance, "Kernel: diagonal below 1/n");
  }
}

Kernel lazy_kernel(const Graph& g) {
  const int n = g.node_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double share = 1.0 / (g.degree(i) + 1);
    w(i, i) = share;
    for (int j : g.neighbors(i)) w(i, j) = share;
  }
  return Kernel(std::move(w));
}

Distribution stationary_law(const Graph& g) {
  const int n = g.node_count();
  const double z = static_cast<double>(g.normalization());
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) m(i) = (g.degree(i) + 1) / z;
  return Distribution(std::move(m));
}

SpectrumReport spectrum_report(const Kernel& k, const Distribution& pi) {
  const int n = k.size();
  require(pi.size() == n, "spectrum_report: size mismatch");
  require(n >= 2, "spectrum_report: need n >= 2");
  require(pi.mass.minCoeff() > 0.0, "spectrum_report: pi must be strictly positive");

  double max_db = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      max_db = std::max(max_db, std::abs(pi.mass(i) * k.rows(i, j) - pi.mass(j) * k.rows(j, i)));
  require(max_db <= kDetailedBalanceTolerance, "spectrum_report: detailed balance violated");

  // S = D^{1/2} W D^{-1/2} is symmetric under detailed balance.
  Eigen::VectorXd sqrt_pi = pi.mass.array().sqrt();
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = sqrt_pi(i) * k.rows(i, j) / sqrt_pi(j);
  s = 0.5 * (s + s.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eigs = solver.eigenvalues();  // ascending
  SpectrumReport report;
  report.lambda_min = eigs(0);
  report.lambda2 = eigs(n - 2);
  report.gamma = 1.0 - report.lambda2;
  return report;
}

double spectral_gap(const Kernel& k, const Distribution& pi) {
  return spectrum_report(k, pi).gamma;
}

Kernel hom_expected_kernel(int n, double p) {
  require(n >= 2, "hom_expected_kernel: n must be >= 2");
  require(p > 0.0 && p <= 1.0, "hom_expected_kernel: p must be in (0,1]");
  const double q_pow = std::pow(1.0 - p, n);
  const double diag = (1.0 - q_pow) / (n * p);
  const double off = (n * p - 1.0 + q_pow) / (n * p * (n - 1.0));
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(n, n, off);
  w.diagonal().setConstant(diag);
  // Exact row sums keep the Kernel invariant clean against rounding.
  for (int i = 0; i < n; ++i) w(i, i) = 1.0 - (n - 1.0) * off;
  return Kernel(std::move(w));
}

double hom_lambda2(int n, double p) {
  require(n >= 2, "hom_lambda2: n must be >= 2");
  require(p > 0.0 && p <= 1.0, "hom_lambda2: p must be in (0,1]");
  return (1.0 - std::pow(1.0 - p, n) - p) / (p * (n - 1.0));
}

double minorization_constant(int n, double p) {
  require(n >= 2, "minorization_constant: n must be >= 2");
  require(p > 0.0 && p <= 1.0, "minorization_constant: p must be in (0,1]");
  return (n * p - 1.0 + std::pow(1.0 - p, n)) / (p * (n - 1.0));
}

double kernel_drift(const Kernel& k_prev, const Kernel& k_next) {
  require(k_prev.size() == k_next.size(), "kernel_drift: size mismatch");
  return (k_next.rows - k_prev.rows).norm();
}

double kernel_drift_operator(const Kernel& k_prev, const Kernel& k_next) {
  require(k_prev.size() == k_next.size(), "kernel_drift_operator: size mismatch");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k_next.rows - k_prev.rows);
  return svd.singularValues()(0);
}

double tv_distance(const Distribution& a, const Distribution& b) {
  require(a.size() == b.size(), "tv_distance: size mismatch");
  return 0.5 * (a.mass - b.mass).lpNorm<1>();
}

Distribution propagate_law(const Distribution& nu, const Kernel& k) {
  require(nu.size() == k.size(), "propagate_law: size mismatch");
  Eigen::VectorXd next = k.rows.transpose() * nu.mass;
  // Row stochasticity preserves the total up to rounding; renormalize the
  // residual so long propagation chains keep the Distribution invariant.
  next /= next.sum();
  return Distribution(std::move(next));
}

double cheeger_conductance(const Graph& g) {
  const int n = g.node_count();
  if (n > kEnumerationCap) throw CapabilityError("cheeger_conductance: exact enumeration capped at n=24");
  std::vector<long long> weight(n);  // d(i)+1
  for (int i = 0; i < n; ++i) weight[i] = g.degree(i) + 1;
  const long long z = g.normalization();

  std::vector<std::uint32_t> adj(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j : g.neighbors(i)) adj[i] |= (1u << j);

  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s = 1; s < full; ++s) {
    long long vol = 0;
    for (std::uint32_t bits = s; bits;) {
      const int i = std::countr_zero(bits);
      vol += weight[i];
      bits &= bits - 1;
    }
    if (2 * vol > z) continue;  // pi(S) <= 1/2
    long long cut = 0;
    for (std::uint32_t bits = s; bits;) {
      const int i = std::countr_zero(bits);
      cut += std::popcount(adj[i] & ~s);
      bits &= bits - 1;
    }
    best = std::min(best, static_cast<double>(cut) / static_cast<double>(vol));
  }
  return best;
}

double population_conductance(const ErHetParams& params) {
  const int n = params.n;
  if (n > kEnumerationCap) throw CapabilityError("population_conductance: exact enumeration capped at n=24");
  std::vector<double> expected_degree(n);
  double total_volume = 0.0;
  for (int a = 0; a < n; ++a) {
    expected_degree[a] = params.expected_degree(a);
    total_volume += expected_degree[a];
  }

  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s = 1; s < full; ++s) {
    double vol = 0.0;
    for (std::uint32_t bits = s; bits;) {
      vol += expected_degree[std::countr_zero(bits)];
      bits &= bits - 1;
    }
    if (vol <= 0.0) continue;
    if (vol > 0.5 * total_volume * (1.0 + 1e-12)) continue;
    double cut = 0.0;
    for (std::uint32_t bits = s; bits;) {
      const int a = std::countr_zero(bits);
      for (int j = 0; j < n; ++j)
        if (!((s >> j) & 1u)) cut += params.prob(a, j);
      bits &= bits - 1;
    }
    best = std::min(best, cut / vol);
  }
  if (!std::isfinite(best)) throw std::invalid_argument("population_conductance: no cut with positive volume");
  return best;
}

}  // namespace fmab
