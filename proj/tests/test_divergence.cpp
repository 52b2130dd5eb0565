#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "polysieve/divergence.hpp"
#include "polysieve/errors.hpp"

using namespace polysieve;

namespace {
const BasisFamily kLegendre = BasisFamily::legendre();
const BasisFamily kLaguerre = BasisFamily::laguerre();

WeightedDensity exp2_pair() {
  return WeightedDensity::from_function(kLaguerre, [](double x) { return 2 * std::exp(-x); });
}
WeightedDensity unit_pair() {
  return WeightedDensity::from_function(kLaguerre, [](double) { return 1.0; });
}

// 0.5 + sum_{j=1..5} eta_j L_j with |eta_j| <= 0.05: strictly positive, unit mass.
WeightedDensity random_positive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<double> v = {0.5};
  for (int j = 1; j <= 5; ++j) v.push_back(u(rng));
  return WeightedDensity::from_coefficients(CoefficientVector(kLegendre, v));
}
}  // namespace

TEST_CASE("closed forms for the Laguerre-weight pair") {
  const auto g1 = exp2_pair();
  const auto g2 = unit_pair();
  CHECK(std::abs(hellinger_sq(g1, g2) - (2 - 4 * std::sqrt(2.0) / 3)) <= 1e-7);
  CHECK(std::abs(kl(g1, g2) - (std::log(2.0) - 0.5)) <= 1e-7);
  CHECK(std::abs(log_var(g1, g2) - 0.25) <= 1e-7);
}

TEST_CASE("identical arguments give zero") {
  std::mt19937_64 rng(1);
  const auto g = random_positive(rng);
  CHECK(hellinger_sq(g, g) == 0.0);
  CHECK(std::abs(kl(g, g)) <= 1e-15);
  CHECK(std::abs(log_var(g, g)) <= 1e-15);
}

TEST_CASE("disjoint supports give Hellinger 2 and an infinite KL") {
  const auto left = WeightedDensity::from_function(kLegendre, [](double x) { return x < 0 ? 1.0 : 0.0; });
  const auto right = WeightedDensity::from_function(kLegendre, [](double x) { return x > 0 ? 1.0 : 0.0; });
  CHECK(std::abs(hellinger_sq(left, right) - 2.0) <= 1e-6);
  CHECK(kl(left, right) == std::numeric_limits<double>::infinity());
  CHECK(log_var(left, right) == std::numeric_limits<double>::infinity());
  const auto rep = divergences(left, right);
  CHECK(rep.kl_infinite);
  CHECK(rep.hellinger_sq <= 2.0);
}

TEST_CASE("clamped bump expansions with disjoint support") {
  // Raw expansions that dip negative; clamping leaves two non-overlapping bumps.
  const auto bump = [](double c) {
    return [c](double x) { return std::max(0.0, 1 - 25 * (x - c) * (x - c)) * 3.75; };
  };
  const auto a = WeightedDensity::from_function(kLegendre, bump(-0.5));
  const auto b = WeightedDensity::from_function(kLegendre, bump(0.5));
  CHECK(a.mass() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(hellinger_sq(a.normalized(), b.normalized()) - 2.0) <= 1e-6);
}

TEST_CASE("random pairs: symmetry, range and nonnegativity") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 200; ++t) {
    const auto g1 = random_positive(rng);
    const auto g2 = random_positive(rng);
    const double h12 = hellinger_sq(g1, g2);
    CHECK(std::abs(h12 - hellinger_sq(g2, g1)) <= 1e-12);
    CHECK(h12 >= 0);
    CHECK(h12 <= 2);
    CHECK(kl(g1, g2) >= -1e-10);
    CHECK(log_var(g1, g2) >= -1e-10);
  }
}

TEST_CASE("log_var is invariant under rescaling g2") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto g1 = random_positive(rng);
    const auto g2 = random_positive(rng);
    const double base = log_var(g1, g2);
    for (double c : {0.01, 0.5, 3.0, 1e4}) {
      const auto scaled = WeightedDensity::from_function(kLegendre, [g2, c](double x) { return c * g2(x); });
      CHECK(std::abs(log_var(g1, scaled) - base) <= 1e-10);
    }
  }
}

TEST_CASE("mismatched domains are rejected") {
  std::mt19937_64 rng(2);
  CHECK_THROWS_AS(hellinger_sq(random_positive(rng), unit_pair()), InputError);
  CHECK_THROWS_AS(kl(random_positive(rng), unit_pair()), InputError);
  CHECK_THROWS_AS(log_var(random_positive(rng), unit_pair()), InputError);
}

TEST_CASE("report cross-check and CSV row") {
  const auto rep = divergences(exp2_pair(), unit_pair());
  CHECK(rep.order == kDivergenceOrder);
  CHECK(rep.discrepancy <= 1e-6);
  CHECK_FALSE(rep.warning);
  CHECK(rep.clamp_mass == 0.0);
  const std::string row = to_csv_row(rep);
  CHECK(std::count(row.begin(), row.end(), ',') == 4);
  CHECK(std::string(kDivergenceCsvHeader) == "h2,kl,logvar,order,discrepancy");
}

TEST_CASE("negative raw expansions are clamped and flagged") {
  const auto neg = WeightedDensity::from_coefficients(CoefficientVector(kLegendre, {0.5, 0.8}));
  const auto flat = WeightedDensity::from_coefficients(CoefficientVector(kLegendre, {0.5}));
  const auto rep = divergences(neg, flat);
  CHECK(rep.clamp_mass > 1e-3);
  CHECK(rep.warning);
  CHECK(rep.hellinger_sq >= 0);
  CHECK(rep.hellinger_sq <= 2);
}
