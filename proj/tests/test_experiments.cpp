#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polysieve/errors.hpp"
#include "polysieve/experiments.hpp"

using namespace polysieve;

namespace {
ExperimentConfig small_exp2(std::vector<int> n, int m) {
  auto c = ExperimentConfig::defaults(ExperimentId::Exp2);
  c.n_values = std::move(n);
  c.m = m;
  c.mcmc.iterations = 1500;
  c.mcmc.burn_in = 500;
  c.grid_points = 101;
  return c;
}

int line_count(const std::string& s) { return int(std::count(s.begin(), s.end(), '\n')); }
}  // namespace

TEST_CASE("experiment defaults at desk and full scale") {
  const auto e1 = ExperimentConfig::defaults(ExperimentId::Exp1, true);
  CHECK(e1.n_values == std::vector<int>{10000});
  CHECK(*e1.k + 1 == 10);
  CHECK(e1.mcmc.iterations == 10000);
  CHECK(e1.mcmc.burn_in == 2000);
  CHECK(e1.sigmas == std::vector<double>{4.03, 5.12, 2.41, 1.68, 1.17, 0.96, 0.64, 0.55, 0.28, 0.25});
  CHECK(ExperimentConfig::defaults(ExperimentId::Exp1).n_values == std::vector<int>{2000});
  CHECK(ExperimentConfig::defaults(ExperimentId::SuppLaguerre).sigmas ==
        std::vector<double>{1, 1, 0.25, 0.11, 0.06, 0.04, 0.03, 0.02, 0.02, 0.01});
  const auto h = ExperimentConfig::defaults(ExperimentId::SuppHermite).sigmas;
  const double ref[] = {1, 0.53, 0.067, 0.012, 0.002, 0.001, 0, 0, 0, 0};
  for (int j = 0; j < 10; ++j) CHECK(h[j] == doctest::Approx(0.8 * ref[j]).epsilon(1e-15));
  CHECK(ExperimentConfig::defaults(ExperimentId::SuppHermite).n_values == std::vector<int>{10000});
  const auto e2 = ExperimentConfig::defaults(ExperimentId::Exp2, true);
  CHECK(e2.n_values == std::vector<int>{100, 500, 1000, 1500, 2000});
  CHECK(e2.m == 100);
}

TEST_CASE("experiment config invariants") {
  auto c = small_exp2({500, 100}, 1);
  CHECK_THROWS_AS(c.validate(), InputError);
  c = small_exp2({100}, 0);
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK_THROWS_AS(parse_experiment_id("exp3"), InputError);
  CHECK(parse_experiment_id("supp-hermite") == ExperimentId::SuppHermite);
}

TEST_CASE("single replication gives exactly one distance with the rate value") {
  const auto r = run_experiment2(small_exp2({100}, 1));
  REQUIRE(r.fits.size() == 1);
  CHECK(r.rates[0] == doctest::Approx(0.3981071705534972).epsilon(1e-14));
  CHECK(r.fits[0].rate == r.rates[0]);
  CHECK(r.k_values == std::vector<int>{4});
  CHECK(r.fits[0].hellinger >= 0);
  CHECK(r.fits[0].hellinger <= std::sqrt(2.0));
  CHECK(line_count(r.distances_csv()) == 2);
}

TEST_CASE("default k_n list") {
  auto c = ExperimentConfig::defaults(ExperimentId::Exp2);
  std::vector<int> ks;
  for (int n : c.n_values) ks.push_back(k_n_rule(n, c.p, KnVariant::Exp2));
  CHECK(ks == std::vector<int>{4, 6, 6, 8, 8});
}

TEST_CASE("reports are reproducible and independent of the worker count") {
  auto c = small_exp2({100, 300}, 3);
  c.threads = 1;
  const auto a = run_experiment2(c);
  c.threads = 3;
  const auto b = run_experiment2(c);
  CHECK(a.distances_csv() == b.distances_csv());
  CHECK(a.curves_csv() == b.curves_csv());
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(line_count(a.distances_csv()) == 1 + 2 * 3);
  c.seed = 2;
  CHECK(run_experiment2(c).distances_csv() != a.distances_csv());
}

TEST_CASE("replication seeds are distinct across indices and streams") {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t n = 0; n < 5; ++n) {
    for (std::uint64_t r = 0; r < 20; ++r) {
      for (std::uint64_t s = 0; s < 4; ++s) seen.push_back(derive_seed(1, n, r, s));
    }
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(derive_seed(7, 1, 2, 3) == derive_seed(7, 1, 2, 3));
}

TEST_CASE("supplement truth curve at the origin") {
  auto c = ExperimentConfig::defaults(ExperimentId::SuppHermite);
  c.n_values = {500};
  c.mcmc.iterations = 1500;
  c.mcmc.burn_in = 500;
  c.grid_points = 101;  // symmetric window, so x = 0 is the middle node
  const auto r = run_supplement(c);
  REQUIRE(r.curves.size() == 1);
  const auto& cs = r.curves[0];
  CHECK(std::abs(cs.curve.x[50]) <= 1e-15);
  CHECK(cs.truth[50] == doctest::Approx(std::sqrt(2 / std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("trigonometric comparison run produces a second curve") {
  auto c = ExperimentConfig::defaults(ExperimentId::Exp1);
  c.n_values = {400};
  c.mcmc.iterations = 1500;
  c.mcmc.burn_in = 500;
  c.basis = Exp1Basis::Both;
  c.grid_points = 101;
  const auto r = run_experiment1(c);
  REQUIRE(r.fits.size() == 2);
  CHECK(r.curves.size() == 2);
  CHECK(r.fits[1].k + 1 == 11);
  const std::string svg = r.plot_svg();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("hardy sums documented values") {
  const auto zero = hardy_sums(std::vector<double>{0, 0, 0}, std::vector<double>{0, 0, 0});
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  const auto one = hardy_sums(std::vector<double>{1}, std::vector<double>{1});
  CHECK(one.lhs == 1.0);
  CHECK(one.rhs == doctest::Approx(kHardyConstant).epsilon(1e-15));
  CHECK(kHardyConstant == doctest::Approx(6.8245).epsilon(1e-4));
}

TEST_CASE("hardy sums against a brute-force oracle") {
  // A_i = b_i sum_{j>i} a_j; RHS = C_H sum_j j^4 a_j^3 max_{i<j} b_i^3.
  const std::vector<double> a = {0.3, 0.0, 1.2, 0.5};
  const std::vector<double> b = {0.7, 2.0, 0.1, 0.4};
  double lhs = 0, rhs = 0;
  for (int i = 0; i < 4; ++i) {
    double tail = 0;
    for (int j = i + 1; j <= 4; ++j) tail += a[j - 1];
    lhs += std::pow(tail * b[i], 3);
  }
  for (int j = 1; j <= 4; ++j) {
    double mx = 0;
    for (int i = 0; i < j; ++i) mx = std::max(mx, b[i]);
    rhs += std::pow(j, 4.0) * std::pow(a[j - 1], 3) * std::pow(mx, 3);
  }
  const auto s = hardy_sums(a, b);
  CHECK(s.lhs == doctest::Approx(lhs).epsilon(1e-13));
  CHECK(s.rhs == doctest::Approx(kHardyConstant * rhs).epsilon(1e-13));
}

TEST_CASE("theory checks pass") {
  CHECK(orthogonality_check().passed);
  const auto h = hardy_check(1000, 50, 1);
  CHECK(h.passed);
  CHECK(h.details["violations"] == 0);
  CHECK(h.details["max_ratio"].get<double>() <= 1.0);
  for (BasisFamily f : {BasisFamily::legendre(), BasisFamily::hermite()}) {
    for (int p : {1, 2}) CHECK(growth_check(f, p).passed);
  }
  CHECK(divergence_check().passed);
}

TEST_CASE("growth ratios stay inside their frozen bands") {
  for (BasisFamily f : {BasisFamily::legendre(), BasisFamily::hermite()}) {
    for (int p : {1, 2}) {
      const auto band = frozen_growth_band(f, p);
      CHECK(band.lo > 0);
      CHECK(band.lo < band.hi);
      for (int j = 5; j <= 40; ++j) {
        const double r = growth_ratio(f, j, p);
        CHECK(r >= band.lo);
        CHECK(r <= band.hi);
      }
    }
  }
}

TEST_CASE("grid integral") {
  std::vector<double> x, y;
  for (int i = 0; i <= 100; ++i) {
    x.push_back(i / 100.0);
    y.push_back(x.back() * x.back());
  }
  CHECK(grid_integral(x, y) == doctest::Approx(1.0 / 3).epsilon(1e-14));
}
