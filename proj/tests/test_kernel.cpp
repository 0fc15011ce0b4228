#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fmab/errors.hpp"
#include "fmab/kernel.hpp"
#include "testutil.hpp"

using namespace fmab;

namespace {

const Graph kPath = Graph::from_edges(3, {{0, 1}, {1, 2}});

}  // namespace

TEST_CASE("lazy_kernel rows") {
  Graph isolated = Graph::from_edges(3, {{1, 2}});
  Kernel k = lazy_kernel(isolated);
  CHECK(k.rows(0, 0) == 1.0);
  CHECK(k.rows(0, 1) == 0.0);

  Kernel complete = lazy_kernel(Graph::complete(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(complete.rows(i, j) == doctest::Approx(0.25).epsilon(1e-12));

  Kernel path = lazy_kernel(kPath);
  CHECK(path.rows(1, 0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(path.rows(1, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(path.rows(1, 2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(path.rows(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(path.rows(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(path.rows(0, 2) == 0.0);
}

TEST_CASE("stationary_law") {
  Distribution uniform = stationary_law(Graph::complete(5));
  for (int i = 0; i < 5; ++i) CHECK(uniform.mass(i) == doctest::Approx(0.2).epsilon(1e-12));

  Distribution path = stationary_law(kPath);
  CHECK(path.mass(0) == doctest::Approx(2.0 / 7).epsilon(1e-12));
  CHECK(path.mass(1) == doctest::Approx(3.0 / 7).epsilon(1e-12));
  CHECK(path.mass(2) == doctest::Approx(2.0 / 7).epsilon(1e-12));
  // pi W = pi by hand for the path kernel.
  Kernel k = lazy_kernel(kPath);
  Eigen::VectorXd piW = k.rows.transpose() * path.mass;
  CHECK((piW - path.mass).lpNorm<Eigen::Infinity>() <= 1e-12);

  Distribution empty = stationary_law(Graph(4));
  for (int i = 0; i < 4; ++i) CHECK(empty.mass(i) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("kernel invariants over random graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + rng.uniform_int(49);
    Graph g = testutil::random_graph(n, rng.next_double(), rng);
    Kernel k = lazy_kernel(g);
    Distribution pi = stationary_law(g);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(k.rows.row(i).sum() - 1.0) <= 1e-12);
      CHECK(k.rows(i, i) >= 1.0 / n - 1e-12);
      for (int j = 0; j < n; ++j) {
        if (i != j && k.rows(i, j) > 0.0) CHECK(g.has_edge(i, j));
        CHECK(std::abs(pi.mass(i) * k.rows(i, j) - pi.mass(j) * k.rows(j, i)) <= 1e-12);
      }
    }
    Eigen::VectorXd residual = k.rows.transpose() * pi.mass - pi.mass;
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("spectral_gap reference values") {
  CHECK(spectral_gap(lazy_kernel(Graph::complete(4)), stationary_law(Graph::complete(4))) ==
        doctest::Approx(1.0).epsilon(1e-10));

  Graph two_cliques = Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  CHECK(spectral_gap(lazy_kernel(two_cliques), stationary_law(two_cliques)) ==
        doctest::Approx(0.0).epsilon(1e-10));

  Kernel hom = hom_expected_kernel(5, 0.3);
  CHECK(spectral_gap(hom, Distribution::uniform(5)) == doctest::Approx(0.556725).epsilon(1e-5));
}

TEST_CASE("spectral_gap rejects broken detailed balance") {
  Eigen::MatrixXd w(2, 2);
  w << 0.9, 0.1, 0.5, 0.5;
  CHECK_THROWS_AS(spectral_gap(Kernel(w), Distribution::uniform(2)), std::invalid_argument);
}

TEST_CASE("hom_expected_kernel closed form vs enumeration") {
  Kernel flat = hom_expected_kernel(4, 1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(flat.rows(i, j) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK(hom_expected_kernel(5, 0.3).rows(0, 0) == doctest::Approx(0.554620).epsilon(1e-5));
  CHECK(hom_expected_kernel(2, 0.5).rows(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(hom_expected_kernel(2, 0.5).rows(0, 1) == doctest::Approx(0.25).epsilon(1e-12));

  for (int n = 2; n <= 12; ++n) {
    for (int pi = 1; pi <= 9; ++pi) {
      const double p = pi / 10.0;
      const double oracle = testutil::enumerated_inverse_moment(n - 1, p);
      CHECK(std::abs(hom_expected_kernel(n, p).rows(0, 0) - oracle) <= 1e-12);
    }
  }

  CHECK_THROWS_AS(hom_expected_kernel(5, 0.0), std::invalid_argument);
}

TEST_CASE("hom_lambda2") {
  CHECK(hom_lambda2(7, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hom_lambda2(5, 0.3) == doctest::Approx(0.443275).epsilon(1e-5));
  // Sparse regime p = 1/n: the limit is 1 - e^{-1}.
  CHECK(std::abs(hom_lambda2(10000, 1e-4) - (1.0 - std::exp(-1.0))) <= 1e-3);

  // The n-1 non-unit eigenvalues all equal hom_lambda2.
  for (int n : {2, 3, 5, 10, 25, 50}) {
    for (double p : {0.1, 0.5, 0.9}) {
      Kernel k = hom_expected_kernel(n, p);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k.rows, Eigen::EigenvaluesOnly);
      const Eigen::VectorXd& eigs = solver.eigenvalues();
      CHECK(std::abs(eigs(n - 1) - 1.0) <= 1e-10);
      const double expected = hom_lambda2(n, p);
      for (int i = 0; i < n - 1; ++i) CHECK(std::abs(eigs(i) - expected) <= 1e-10);
    }
  }
}

TEST_CASE("minorization_constant") {
  CHECK(minorization_constant(6, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(minorization_constant(5, 0.3) == doctest::Approx(0.556725).epsilon(1e-5));
  // alpha = n * off-diagonal entry.
  CHECK(minorization_constant(2, 0.5) ==
        doctest::Approx(2.0 * hom_expected_kernel(2, 0.5).rows(0, 1)).epsilon(1e-12));
  for (int n = 2; n <= 50; ++n)
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0})
      CHECK(std::abs(minorization_constant(n, p) - (1.0 - hom_lambda2(n, p))) <= 1e-12);
}

TEST_CASE("kernel_drift") {
  Kernel complete = lazy_kernel(Graph::complete(2));
  Kernel empty = lazy_kernel(Graph(2));
  CHECK(kernel_drift(complete, complete) == 0.0);
  CHECK(kernel_drift(complete, empty) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kernel_drift(complete, empty) == kernel_drift(empty, complete));
  // Frobenius dominates the operator norm.
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Kernel a = lazy_kernel(testutil::random_graph(12, 0.4, rng));
    Kernel b = lazy_kernel(testutil::random_graph(12, 0.4, rng));
    CHECK(kernel_drift_operator(a, b) <= kernel_drift(a, b) + 1e-12);
  }
  CHECK_THROWS_AS(kernel_drift(lazy_kernel(Graph(2)), lazy_kernel(Graph(3))), std::invalid_argument);
}

TEST_CASE("tv_distance") {
  Distribution a = Distribution::point_mass(2, 0);
  Distribution b = Distribution::point_mass(2, 1);
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::VectorXd u(2), v(2);
  u << 0.5, 0.5;
  v << 0.25, 0.75;
  CHECK(tv_distance(Distribution(u), Distribution(v)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("propagate_law") {
  Rng rng(13);
  Graph g = testutil::random_graph(20, 0.3, rng);
  Kernel k = lazy_kernel(g);
  Distribution pi = stationary_law(g);
  CHECK(tv_distance(propagate_law(pi, k), pi) <= 1e-12);

  Graph isolated = Graph::from_edges(3, {{1, 2}});
  Distribution point = Distribution::point_mass(3, 0);
  CHECK(tv_distance(propagate_law(point, lazy_kernel(isolated)), point) <= 1e-12);

  Distribution start = Distribution::point_mass(3, 0);
  Distribution prop = propagate_law(start, lazy_kernel(kPath));
  CHECK(prop.mass(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prop.mass(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prop.mass(2) == 0.0);
}

TEST_CASE("deterministic tv recursion on realized sequences") {
  Rng seq_rng(14);
  Graph g0 = testutil::random_graph(30, 0.5, seq_rng);
  const EdgeMarkovParams params(30, 0.5, 0.5, g0);

  for (std::uint64_t seed : {21u, 22u, 23u}) {
    Rng rng(seed);
    Graph g = g0;
    Kernel k = lazy_kernel(g);
    Distribution pi = stationary_law(g);
    Distribution nu = Distribution::point_mass(30, 0);
    double gamma0 = 1.0, eps_max = 0.0;
    std::vector<double> deviations{tv_distance(nu, pi)};
    for (int t = 0; t < 50; ++t) {
      const double gamma = spectral_gap(k, pi);
      gamma0 = std::min(gamma0, gamma);
      Graph g_next = step_edge_markov(g, params, rng);
      Kernel k_next = lazy_kernel(g_next);
      Distribution pi_next = stationary_law(g_next);
      const double eps = tv_distance(pi_next, pi);
      eps_max = std::max(eps_max, eps);
      Distribution nu_next = propagate_law(nu, k);
      const double d_now = deviations.back();
      const double d_next = tv_distance(nu_next, pi_next);
      CHECK(d_next <= (1.0 - gamma) * d_now + eps + 1e-10);
      deviations.push_back(d_next);
      g = std::move(g_next);
      k = std::move(k_next);
      pi = std::move(pi_next);
      nu = std::move(nu_next);
    }
    // Iterated bound with gamma0 and eps_max measured on the same sequence.
    for (std::size_t t = 1; t < deviations.size(); ++t) {
      CHECK(deviations[t - 1] <=
            std::pow(1.0 - gamma0, static_cast<double>(t - 1)) + eps_max / gamma0 + 1e-10);
    }
  }
}

TEST_CASE("pure contraction on a frozen graph") {
  Rng rng(15);
  Graph g = testutil::random_graph(20, 0.4, rng);
  Kernel k = lazy_kernel(g);
  Distribution pi = stationary_law(g);
  const double gamma = spectral_gap(k, pi);
  Distribution nu = Distribution::point_mass(20, 3);
  const double d0 = tv_distance(nu, pi);
  for (int t = 1; t <= 40; ++t) {
    nu = propagate_law(nu, k);
    CHECK(tv_distance(nu, pi) <= std::pow(1.0 - gamma, t) * d0 + 1e-10);
  }
}

TEST_CASE("cheeger_conductance") {
  Graph disconnected = Graph::from_edges(5, {{0, 1}, {2, 3}});
  CHECK(cheeger_conductance(disconnected) == 0.0);

  // Balanced cuts of K4 attain the minimum: |dS| = 4 over volume 8.
  CHECK(cheeger_conductance(Graph::complete(4)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cheeger_conductance(Graph::complete(4)) ==
        doctest::Approx(testutil::brute_conductance(Graph::complete(4))).epsilon(1e-12));

  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = testutil::random_graph(8, 0.5, rng);
    CHECK(cheeger_conductance(g) == doctest::Approx(testutil::brute_conductance(g)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(cheeger_conductance(Graph(25)), CapabilityError);
}

TEST_CASE("cheeger sandwich h^2/2 <= gamma") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = testutil::random_graph(8, 0.5, rng);
    const double h = cheeger_conductance(g);
    const double gamma = spectral_gap(lazy_kernel(g), stationary_law(g));
    CHECK(h * h / 2.0 <= gamma + 1e-12);
  }
}

TEST_CASE("population_conductance") {
  const int n = 4;
  std::vector<double> hom(n * n, 0.35);
  for (int i = 0; i < n; ++i) hom[i * n + i] = 0.0;
  CHECK(population_conductance(ErHetParams(n, hom)) == doctest::Approx(2.0 / 3).epsilon(1e-12));

  // Two blocks with no cross probabilities.
  std::vector<double> blocks(16, 0.0);
  auto set = [&](int i, int j, double v) { blocks[i * 4 + j] = blocks[j * 4 + i] = v; };
  set(0, 1, 0.8);
  set(2, 3, 0.6);
  CHECK(population_conductance(ErHetParams(4, blocks)) == 0.0);

  // Scaling invariance.
  std::vector<double> profile(16, 0.0);
  auto set2 = [&](int i, int j, double v) { profile[i * 4 + j] = profile[j * 4 + i] = v; };
  set2(0, 1, 0.2);
  set2(1, 2, 0.4);
  set2(2, 3, 0.1);
  set2(0, 3, 0.3);
  std::vector<double> scaled = profile;
  for (double& v : scaled) v *= 2.0;
  CHECK(population_conductance(ErHetParams(4, profile)) ==
        doctest::Approx(population_conductance(ErHetParams(4, scaled))).epsilon(1e-12));

  CHECK_THROWS_AS(population_conductance(ErHetParams(25, std::vector<double>(625, 0.0))), CapabilityError);
}
