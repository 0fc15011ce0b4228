#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "fmab/bounds.hpp"
#include "testutil.hpp"

using namespace fmab;

TEST_CASE("bern_kl values and conventions") {
  CHECK(bern_kl(0.3, 0.3) == 0.0);
  CHECK(bern_kl(0.9, 0.1) == doctest::Approx(0.8 * std::log(9.0)).epsilon(1e-12));
  CHECK(bern_kl(0.4, 0.6) == doctest::Approx(0.2 * std::log(1.5)).epsilon(1e-12));
  CHECK(bern_kl(0.0, 0.4) == doctest::Approx(std::log(1.0 / 0.6)).epsilon(1e-12));
  CHECK(bern_kl(1.0, 0.4) == doctest::Approx(std::log(1.0 / 0.4)).epsilon(1e-12));
  CHECK(std::isinf(bern_kl(0.5, 0.0)));
  CHECK(std::isinf(bern_kl(0.5, 1.0)));
  CHECK(bern_kl(0.0, 0.0) == 0.0);
  CHECK(bern_kl(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(bern_kl(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("bern_kl dominates the Pinsker envelope") {
  for (int i = 1; i <= 19; ++i) {
    for (int j = 1; j <= 19; ++j) {
      const double p = i / 20.0, q = j / 20.0;
      CHECK(bern_kl(p, q) >= 2.0 * (p - q) * (p - q) - 1e-12);
    }
  }
}

TEST_CASE("per_arm_lower_bound") {
  const double confidence = bern_kl(0.9, 0.1);
  const double exact = per_arm_lower_bound(0.1, 0.1, true);
  CHECK(exact == doctest::Approx(confidence / (0.2 * std::log(1.5))).epsilon(1e-12));
  CHECK(exact == doctest::Approx(21.676).epsilon(1e-4));

  const double clean = per_arm_lower_bound(0.1, 0.1, false);
  CHECK(clean == doctest::Approx((3.0 / 32.0) * confidence / 0.01).epsilon(1e-12));
  CHECK(clean == doctest::Approx(16.479).epsilon(1e-4));

  for (int gi = 1; gi <= 25; ++gi) {
    for (int di = 1; di <= 9; ++di) {
      const double gap = gi / 100.0;
      const double delta = di / 20.0;
      CHECK(per_arm_lower_bound(gap, delta, false) <= per_arm_lower_bound(gap, delta, true) + 1e-12);
    }
  }

  CHECK_THROWS_AS(per_arm_lower_bound(0.3, 0.1, false), std::invalid_argument);
  CHECK_THROWS_AS(per_arm_lower_bound(0.5, 0.1, true), std::invalid_argument);
  CHECK_THROWS_AS(per_arm_lower_bound(0.1, 0.6, true), std::invalid_argument);
}

TEST_CASE("identification_time_lower_bound") {
  // Equal-gap instance n=10, gap 0.2, delta 0.1: (3/32) * 9 * kl(0.9,0.1) / 0.04.
  const double expected = (3.0 / 32.0) * 9.0 * bern_kl(0.9, 0.1) / 0.04;
  const GapProfile equal(std::vector<double>(9, 0.2), 0.1);
  CHECK(identification_time_lower_bound(equal) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(identification_time_lower_bound(equal) == doctest::Approx(37.078).epsilon(1e-4));

  const GapProfile single({0.2}, 0.1);
  CHECK(identification_time_lower_bound(single) ==
        doctest::Approx(per_arm_lower_bound(0.2, 0.1, false)).epsilon(1e-12));

  const GapProfile halved(std::vector<double>(9, 0.1), 0.1);
  CHECK(identification_time_lower_bound(halved) ==
        doctest::Approx(4.0 * identification_time_lower_bound(equal)).epsilon(1e-12));

  // Gaps above 1/4 switch to the exact form; above 1/2 they contribute 0.
  const GapProfile mixed({0.2, 0.3, 0.8}, 0.1);
  CHECK(identification_time_lower_bound(mixed) ==
        doctest::Approx(per_arm_lower_bound(0.2, 0.1, false) + per_arm_lower_bound(0.3, 0.1, true))
            .epsilon(1e-12));
}

TEST_CASE("traversal_lower_bound") {
  CHECK(traversal_lower_bound(7) == 6);
  CHECK(traversal_lower_bound(2) == 1);
  CHECK_THROWS_AS(traversal_lower_bound(1), std::invalid_argument);
}

TEST_CASE("effective_size") {
  const int n = 10;
  std::vector<double> hom(n * n, 0.5);
  for (int i = 0; i < n; ++i) hom[i * n + i] = 0.0;
  CHECK(effective_size(ErHetParams(n, hom)) == doctest::Approx((45.0 + 10.0) / 4.5).epsilon(1e-12));

  for (double p : {0.1, 0.5, 0.9}) {
    std::vector<double> matrix(n * n, p);
    for (int i = 0; i < n; ++i) matrix[i * n + i] = 0.0;
    const double n_eff = effective_size(ErHetParams(n, matrix));
    CHECK(n_eff == doctest::Approx(n + n / ((n - 1.0) * p)).epsilon(1e-12));
    CHECK(n_eff > n);
  }

  // One weakly connected node drives n_eff like 1/eps.
  auto weak_profile = [&](double eps) {
    std::vector<double> matrix(n * n, 0.9);
    for (int i = 0; i < n; ++i) matrix[i * n + i] = 0.0;
    for (int j = 1; j < n; ++j) matrix[0 * n + j] = matrix[j * n + 0] = eps;
    return ErHetParams(n, matrix);
  };
  const double at_tenth = effective_size(weak_profile(0.1));
  const double at_hundredth = effective_size(weak_profile(0.01));
  CHECK(at_hundredth / at_tenth >= 5.0);
  CHECK(at_hundredth / at_tenth <= 20.0);

  std::vector<double> disconnected(n * n, 0.0);
  CHECK_THROWS_AS(effective_size(ErHetParams(n, disconnected)), std::invalid_argument);
}

TEST_CASE("visitation_lower_bound") {
  CHECK(visitation_lower_bound(1, 0.0, 0.5, 10, 0.1) < 0.0);
  CHECK(visitation_lower_bound(1000, 0.0, 0.5, 10, 0.1) < 0.0);

  const double log_term = std::log(5.0 * 100 / 0.1);
  const double oracle =
      100000.0 * 0.01 - 2.0 / 0.5 - (std::sqrt(2.0 * 100000.0 * log_term) + (2.0 / 3.0) * log_term);
  CHECK(visitation_lower_bound(100000, 0.01, 0.5, 100, 0.1) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(oracle > -315.5);
  CHECK(oracle < -314.0);

  // Increasing in t_exp beyond the square-root crossover.
  double prev = visitation_lower_bound(200000, 0.01, 0.5, 100, 0.1);
  for (long long t = 300000; t <= 1000000; t += 100000) {
    const double next = visitation_lower_bound(t, 0.01, 0.5, 100, 0.1);
    CHECK(next > prev);
    prev = next;
  }
}

TEST_CASE("pi_eff") {
  CHECK(pi_eff(0.04, 0.0, 0.5) == 0.04);
  CHECK(pi_eff(0.01, 0.001, 0.5) == doctest::Approx(0.006).epsilon(1e-12));
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const double pi0 = rng.next_double();
    const double eps = rng.next_double() * 0.1;
    const double gamma = 0.05 + 0.95 * rng.next_double();
    CHECK(pi_eff(pi0, eps, gamma) <= pi0);
  }
}

TEST_CASE("gamma_het_lower_bound") {
  // Monotone in phi*; shrinks as eta grows; bounded by c for generous inputs.
  CHECK(gamma_het_lower_bound(0.25, 0.5, 10.0) < gamma_het_lower_bound(0.25, 0.8, 10.0));
  CHECK(gamma_het_lower_bound(0.4, 0.5, 10.0) < gamma_het_lower_bound(0.1, 0.5, 10.0));
  const double eta = 0.25, phi = 0.5, sigma = 8.0;
  const double ratio = (1.0 - eta) / (1.0 + eta);
  const double denom = 1.0 + 1.0 / ((1.0 - eta) * sigma);
  CHECK(gamma_het_lower_bound(eta, phi, sigma, 2.0) ==
        doctest::Approx(2.0 * ratio * ratio * phi * phi / (denom * denom)).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_het_lower_bound(1.5, 0.5, 1.0), std::invalid_argument);
}
