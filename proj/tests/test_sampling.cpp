#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"
#include "polysieve/sampling.hpp"

using namespace polysieve;

namespace {
const BasisFamily kLegendre = BasisFamily::legendre();

std::vector<TrueDensitySpec> all_specs() {
  return {TrueDensitySpec::build(TrueDensityKind::Exp1Sine, kLegendre),
          TrueDensitySpec::build(TrueDensityKind::Exp1Sine, BasisFamily::trigonometric()),
          TrueDensitySpec::build(TrueDensityKind::SuppExponential, BasisFamily::laguerre()),
          TrueDensitySpec::build(TrueDensityKind::SuppGaussian, BasisFamily::hermite()),
          TrueDensitySpec::from_coefficients(CoefficientVector(kLegendre, {0.5, 0.3, -0.2, 0.1}))};
}
}  // namespace

TEST_CASE("documented true-density values") {
  const auto ex = TrueDensitySpec::build(TrueDensityKind::SuppExponential, BasisFamily::laguerre());
  CHECK(ex.as_weighted().mass() == doctest::Approx(1.0).epsilon(1e-12));
  const auto ga = TrueDensitySpec::build(TrueDensityKind::SuppGaussian, BasisFamily::hermite());
  CHECK(ga(0.0) == doctest::Approx(std::sqrt(2 / std::numbers::pi)).epsilon(1e-15));
  CHECK(ga.lebesgue_density(0.0) == doctest::Approx(std::sqrt(2 / std::numbers::pi)).epsilon(1e-15));
  const auto s = TrueDensitySpec::build(TrueDensityKind::Exp1Sine, kLegendre);
  CHECK(std::abs(s(1.0)) <= 1e-15);
  CHECK(std::abs(s(-1.0)) <= 1e-15);
  CHECK(s.c0() > 0);
}

TEST_CASE("Exp1Sine normalizer against an independent Simpson integral") {
  const double raw = oracle::simpson(
      [](double x) { return std::expm1(std::sin(std::numbers::pi * (x + 1) / 2)); }, -1, 1, 20000);
  const auto s = TrueDensitySpec::build(TrueDensityKind::Exp1Sine, kLegendre);
  CHECK(s.c0() == doctest::Approx(1 / raw).epsilon(1e-10));
}

TEST_CASE("true densities are nonnegative with unit mass") {
  for (const auto& spec : all_specs()) {
    if (spec.kind() == TrueDensityKind::CoefficientBacked) {
      // Clamped expansion: Gauss rules smear the kink, so compare with fine Simpson.
      CHECK(std::abs(oracle::simpson([&](double x) { return spec(x); }, -1, 1, 400000) - 1.0) <= 1e-8);
    } else {
      CHECK(spec.as_weighted().mass() == doctest::Approx(1.0).epsilon(1e-8));
    }
    const Interval d = spec.family().domain();
    const double lo = d.bounded() ? d.lo : (d.lo == 0 ? 0.0 : -4.0);
    const double hi = d.bounded() ? d.hi : 4.0;
    for (int i = 0; i <= 200; ++i) CHECK(spec(lo + (hi - lo) * i / 200.0) >= 0);
  }
}

TEST_CASE("unsupported combinations are rejected") {
  CHECK_THROWS_AS(TrueDensitySpec::build(TrueDensityKind::SuppGaussian, kLegendre), InputError);
  CHECK_THROWS_AS(TrueDensitySpec::build(TrueDensityKind::Exp1Sine, BasisFamily::hermite()), InputError);
  CHECK_THROWS_AS(parse_true_density_kind("cauchy"), InputError);
  CHECK(parse_true_density_kind(to_string(TrueDensityKind::SuppGaussian)) == TrueDensityKind::SuppGaussian);
}

TEST_CASE("exponential sample mean within the CLT bound") {
  const auto ex = TrueDensitySpec::build(TrueDensityKind::SuppExponential, BasisFamily::laguerre());
  const std::size_t n = 1000000;
  const auto y = draw(ex, n, 42);
  double m = 0;
  for (double v : y) m += v;
  m /= n;
  CHECK(std::abs(m - 0.5) <= 3 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("gaussian sample variance within 1% of 1/4") {
  const auto ga = TrueDensitySpec::build(TrueDensityKind::SuppGaussian, BasisFamily::hermite());
  const std::size_t n = 1000000;
  const auto y = draw(ga, n, 43);
  double m = 0, v = 0;
  for (double x : y) m += x;
  m /= n;
  for (double x : y) v += (x - m) * (x - m);
  v /= (n - 1);
  CHECK(std::abs(v - 0.25) <= 0.0025);
}

TEST_CASE("draws are deterministic in the seed") {
  for (const auto& spec : all_specs()) {
    CHECK(draw(spec, 5, 99) == draw(spec, 5, 99));
    CHECK(draw(spec, 5, 99) != draw(spec, 5, 100));
  }
  CHECK_THROWS_AS(draw(all_specs()[0], 0, 1), InputError);
}

TEST_CASE("KS statistic below 1.95/sqrt(n) for every kind") {
  const std::size_t n = 100000;
  for (const auto& spec : all_specs()) {
    const auto y = draw(spec, n, 2718);
    CHECK(ks_statistic(spec, y) <= 1.95 / std::sqrt(double(n)));
  }
}

TEST_CASE("inverse CDF round trip") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& spec : all_specs()) {
    for (int i = 0; i < 1000; ++i) {
      const double p = u(rng);
      CHECK(std::abs(spec.cdf(spec.inverse_cdf(p)) - p) <= 2e-4);
    }
  }
}

TEST_CASE("numeric CDF agrees with an independent integral") {
  const auto s = TrueDensitySpec::build(TrueDensityKind::Exp1Sine, kLegendre);
  for (double x : {-0.8, -0.2, 0.3, 0.9}) {
    const double ref = oracle::simpson([&](double t) { return s.lebesgue_density(t); }, -1, x, 20000);
    CHECK(s.cdf(x) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("observations round-trip through CSV") {
  const auto y = draw(all_specs()[3], 50, 7);
  const auto path = std::filesystem::temp_directory_path() / "polysieve_obs_test.csv";
  write_observations_csv(path, y);
  CHECK(read_observations_csv(path) == y);
  std::filesystem::remove(path);
}
