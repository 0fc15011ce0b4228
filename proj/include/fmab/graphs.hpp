#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fmab/rng.hpp"

namespace fmab {

// Undirected simple graph on nodes 0..n-1 with packed bitset adjacency rows.
// Values are cheap to copy and treated as immutable once a process hands
// them out; flip and neighborhood queries are the hot path.
class Graph {
 public:
  explicit Graph(int n);
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
  static Graph complete(int n);

  int node_count() const { return n_; }
  int edge_count() const { return edge_count_; }

  bool has_edge(int i, int j) const;
  void set_edge(int i, int j, bool present);

  int degree(int i) const;
  // Z = 2|E| + n, the lazy-walk normalization.
  long long normalization() const { return 2LL * edge_count_ + n_; }

  std::vector<int> neighbors(int i) const;
  std::vector<std::pair<int, int>> edges() const;

  // Row i as packed 64-bit words (words_per_row() of them).
  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }
  int words_per_row() const { return words_; }

  bool operator==(const Graph& other) const = default;

 private:
  std::uint64_t* mutable_row(int i) { return bits_.data() + static_cast<std::size_t>(i) * words_; }

  int n_ = 0;
  int words_ = 0;
  int edge_count_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct ErHomParams {
  int n = 0;
  double p = 0.0;
  ErHomParams(int n_, double p_);
};

struct ErHetParams {
  int n = 0;
  // Symmetric, zero diagonal, entries in [0,1]; row-major n*n.
  std::vector<double> p_matrix;
  ErHetParams(int n_, std::vector<double> p_matrix_);
  double prob(int i, int j) const { return p_matrix[static_cast<std::size_t>(i) * n + j]; }
  // d_a* = sum_j p_aj
  double expected_degree(int a) const;
};

struct EdgeMarkovParams {
  int n = 0;
  double alpha = 0.0;  // absent -> present
  double beta = 0.0;   // present -> absent
  Graph initial_graph;
  EdgeMarkovParams(int n_, double alpha_, double beta_, Graph g0);
};

struct TypicalityReport {
  std::vector<bool> degree_ok;
  bool edge_count_ok = false;
  double min_stationary_mass = 0.0;
  double normalization = 0.0;  // Z = 2|E| + n
  double tolerance_eta = 0.0;
};

Graph sample_er_hom(const ErHomParams& params, Rng& rng);
Graph sample_er_het(const ErHetParams& params, Rng& rng);

// One edge-Markov transition: single pass over all pairs, one uniform variate
// per pair compared against alpha or beta depending on the current state.
Graph step_edge_markov(const Graph& g_prev, const EdgeMarkovParams& params, Rng& rng);

// Pair-level stepper without the process-parameter restrictions; alpha and
// beta may sit on the [0,1] boundary (frozen chain, guaranteed flips).
Graph step_edge_markov(const Graph& g_prev, double alpha, double beta, Rng& rng);

// |E_a symmetric-difference E_b|
int edge_flip_count(const Graph& g_a, const Graph& g_b);

// binom(n,2) * 2*alpha*beta/(alpha+beta); expected per-step flips at stationarity.
double expected_flips_stationary(int n, double alpha, double beta);

// p_inf = alpha/(alpha+beta)
double stationary_density(double alpha, double beta);

// p_t = p_inf + (1-alpha-beta)^t (p0 - p_inf)
double marginal_edge_prob(double p0, double alpha, double beta, long long t);

// ceil((2 ln n + ln(1/delta)) / (alpha+beta))
long long burn_in_length(int n, double alpha, double beta, double delta);

struct TypicalityConstants {
  double c1 = 1.0;  // degree band
  double c2 = 1.0;  // edge-count band
};

// Checks degree / edge-count concentration around the stationary ER law:
//   |d(i) - (n-1)p_inf| <= c1 sqrt(n p_inf log_term)
//   ||E| - n(n-1)p_inf/2| <= c2 n sqrt(p_inf log_term)
// log_term = log(nT/delta) is supplied by the caller.
TypicalityReport typicality_check(const Graph& g, double p_inf, double eta, double log_term,
                                  const TypicalityConstants& constants = {});

// zeta0 = zeta + C sqrt(zeta log_term / n^2) + C' log_term / n^2,
// with zeta the normalized expected flip rate E[F_t]/n^2.
double flip_envelope(double zeta, int n, double log_term, double c, double c_prime);

}  // namespace fmab
