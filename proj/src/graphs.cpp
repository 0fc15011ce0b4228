#include "fmab/graphs.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace fmab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Graph::Graph(int n) : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0) {
  require(n >= 1, "Graph: n must be >= 1");
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (auto [i, j] : edges) g.set_edge(i, j, true);
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
  return g;
}

bool Graph::has_edge(int i, int j) const {
  return (row(i)[j >> 6] >> (j & 63)) & 1ULL;
}

void Graph::set_edge(int i, int j, bool present) {
  require(i != j, "Graph: self-loops not allowed");
  require(i >= 0 && i < n_ && j >= 0 && j < n_, "Graph: node index out of range");
  const bool had = has_edge(i, j);
  if (had == present) return;
  const std::uint64_t mi = 1ULL << (j & 63);
  const std::uint64_t mj = 1ULL << (i & 63);
  if (present) {
    mutable_row(i)[j >> 6] |= mi;
    mutable_row(j)[i >> 6] |= mj;
    ++edge_count_;
  } else {
    mutable_row(i)[j >> 6] &= ~mi;
    mutable_row(j)[i >> 6] &= ~mj;
    --edge_count_;
  }
}

int Graph::degree(int i) const {
  const std::uint64_t* r = row(i);
  int d = 0;
  for (int w = 0; w < words_; ++w) d += std::popcount(r[w]);
  return d;
}

std::vector<int> Graph::neighbors(int i) const {
  std::vector<int> out;
  const std::uint64_t* r = row(i);
  for (int w = 0; w < words_; ++w) {
    std::uint64_t bits = r[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(w * 64 + b);
      bits &= bits - 1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count_);
  for (int i = 0; i < n_; ++i)
    for (int j : neighbors(i))
      if (j > i) out.emplace_back(i, j);
  return out;
}

ErHomParams::ErHomParams(int n_, double p_) : n(n_), p(p_) {
  require(n >= 2, "ErHomParams: n must be >= 2");
  require(p >= 0.0 && p <= 1.0, "ErHomParams: p must be in [0,1]");
}

ErHetParams::ErHetParams(int n_, std::vector<double> p_matrix_) : n(n_), p_matrix(std::move(p_matrix_)) {
  require(n >= 2, "ErHetParams: n must be >= 2");
  require(p_matrix.size() == static_cast<std::size_t>(n) * n, "ErHetParams: p_matrix must be n*n");
  for (int i = 0; i < n; ++i) {
    require(prob(i, i) == 0.0, "ErHetParams: diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      require(prob(i, j) >= 0.0 && prob(i, j) <= 1.0, "ErHetParams: entries must be in [0,1]");
      require(prob(i, j) == prob(j, i), "ErHetParams: p_matrix must be symmetric");
    }
  }
}

double ErHetParams::expected_degree(int a) const {
  double d = 0.0;
  for (int j = 0; j < n; ++j) d += prob(a, j);
  return d;
}

EdgeMarkovParams::EdgeMarkovParams(int n_, double alpha_, double beta_, Graph g0)
    : n(n_), alpha(alpha_), beta(beta_), initial_graph(std::move(g0)) {
  require(n >= 2, "EdgeMarkovParams: n must be >= 2");
  require(alpha > 0.0 && alpha < 1.0, "EdgeMarkovParams: alpha must be in (0,1)");
  require(beta > 0.0 && beta < 1.0, "EdgeMarkovParams: beta must be in (0,1)");
  require(initial_graph.node_count() == n, "EdgeMarkovParams: initial graph size mismatch");
}

Graph sample_er_hom(const ErHomParams& params, Rng& rng) {
  Graph g(params.n);
  for (int i = 0; i < params.n; ++i)
    for (int j = i + 1; j < params.n; ++j)
      if (rng.bernoulli(params.p)) g.set_edge(i, j, true);
  return g;
}

Graph sample_er_het(const ErHetParams& params, Rng& rng) {
  Graph g(params.n);
  for (int i = 0; i < params.n; ++i)
    for (int j = i + 1; j < params.n; ++j)
      if (rng.bernoulli(params.prob(i, j))) g.set_edge(i, j, true);
  return g;
}

Graph step_edge_markov(const Graph& g_prev, const EdgeMarkovParams& params, Rng& rng) {
  require(g_prev.node_count() == params.n, "step_edge_markov: graph size mismatch");
  return step_edge_markov(g_prev, params.alpha, params.beta, rng);
}

Graph step_edge_markov(const Graph& g_prev, double alpha, double beta, Rng& rng) {
  require(alpha >= 0.0 && alpha <= 1.0, "step_edge_markov: alpha must be in [0,1]");
  require(beta >= 0.0 && beta <= 1.0, "step_edge_markov: beta must be in [0,1]");
  const int n = g_prev.node_count();
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool present = g_prev.has_edge(i, j);
      const double u = rng.next_double();
      const bool next = present ? (u >= beta) : (u < alpha);
      if (next) g.set_edge(i, j, true);
    }
  }
  return g;
}

int edge_flip_count(const Graph& g_a, const Graph& g_b) {
  require(g_a.node_count() == g_b.node_count(), "edge_flip_count: size mismatch");
  int flips2 = 0;  // counts each flipped edge from both endpoints
  const int words = g_a.words_per_row();
  for (int i = 0; i < g_a.node_count(); ++i) {
    const std::uint64_t* ra = g_a.row(i);
    const std::uint64_t* rb = g_b.row(i);
    for (int w = 0; w < words; ++w) flips2 += std::popcount(ra[w] ^ rb[w]);
  }
  return flips2 / 2;
}

double expected_flips_stationary(int n, double alpha, double beta) {
  require(n >= 2, "expected_flips_stationary: n must be >= 2");
  require(alpha >= 0.0 && beta >= 0.0, "expected_flips_stationary: rates must be >= 0");
  if (alpha + beta == 0.0) return 0.0;
  const double m = 0.5 * n * (n - 1);
  return m * 2.0 * alpha * beta / (alpha + beta);
}

double stationary_density(double alpha, double beta) {
  require(alpha + beta > 0.0, "stationary_density: alpha+beta must be > 0");
  return alpha / (alpha + beta);
}

double marginal_edge_prob(double p0, double alpha, double beta, long long t) {
  require(t >= 0, "marginal_edge_prob: t must be >= 0");
  const double p_inf = stationary_density(alpha, beta);
  return p_inf + std::pow(1.0 - alpha - beta, static_cast<double>(t)) * (p0 - p_inf);
}

long long burn_in_length(int n, double alpha, double beta, double delta) {
  require(n >= 2, "burn_in_length: n must be >= 2");
  require(delta > 0.0 && delta <= 1.0, "burn_in_length: delta must be in (0,1]");
  require(alpha + beta > 0.0, "burn_in_length: alpha+beta must be > 0");
  return static_cast<long long>(std::ceil((2.0 * std::log(n) + std::log(1.0 / delta)) / (alpha + beta)));
}

TypicalityReport typicality_check(const Graph& g, double p_inf, double eta, double log_term,
                                  const TypicalityConstants& constants) {
  require(eta > 0.0 && eta < 0.5, "typicality_check: eta must be in (0,1/2)");
  const int n = g.node_count();
  TypicalityReport report;
  report.tolerance_eta = eta;
  report.normalization = static_cast<double>(g.normalization());

  const double degree_band = constants.c1 * std::sqrt(n * p_inf * log_term);
  const double mean_degree = (n - 1) * p_inf;
  report.degree_ok.resize(n);
  double min_mass = 1.0;
  for (int i = 0; i < n; ++i) {
    const int d = g.degree(i);
    report.degree_ok[i] = std::abs(d - mean_degree) <= degree_band;
    min_mass = std::min(min_mass, (d + 1) / report.normalization);
  }
  report.min_stationary_mass = min_mass;

  const double mean_edges = 0.5 * n * (n - 1) * p_inf;
  const double edge_band = constants.c2 * n * std::sqrt(p_inf * log_term);
  report.edge_count_ok = std::abs(g.edge_count() - mean_edges) <= edge_band;
  return report;
}

double flip_envelope(double zeta, int n, double log_term, double c, double c_prime) {
  require(zeta >= 0.0, "flip_envelope: zeta must be >= 0");
  require(n >= 1, "flip_envelope: n must be >= 1");
  const double n2 = static_cast<double>(n) * n;
  return zeta + c * std::sqrt(zeta * log_term / n2) + c_prime * log_term / n2;
}

}  // namespace fmab
