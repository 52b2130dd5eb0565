#include "polysieve/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "polysieve/errors.hpp"

namespace polysieve {

namespace {

constexpr double kMassTol = 1e-8;

double exp1_sine_raw(double x) { return std::expm1(std::sin(std::numbers::pi * (x + 1.0) / 2.0)); }

double uniform01(std::mt19937_64& rng) {
  // 53 random mantissa bits, strictly inside (0, 1).
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-std::numbers::sqrt2 * x); }

// int max(g, 0) dx over a bounded interval with unit weight: Gauss-Legendre on
// each piece between sign changes of g, so the kink never sits inside a rule.
double clamped_mass_bounded(const std::function<double(double)>& g, Interval d) {
  std::vector<double> cuts = {d.lo};
  const int scan = kValidationGridPoints;
  double x_prev = d.lo, g_prev = g(d.lo);
  for (int i = 1; i < scan; ++i) {
    const double x = d.lo + (d.hi - d.lo) * i / (scan - 1);
    const double gx = g(x);
    if ((g_prev < 0) != (gx < 0)) {
      double a = x_prev, b = x;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        if ((g(mid) < 0) == (g_prev < 0)) a = mid; else b = mid;
      }
      cuts.push_back(0.5 * (a + b));
    }
    x_prev = x;
    g_prev = gx;
  }
  cuts.push_back(d.hi);
  const QuadratureRule& rule = cached_gauss_rule(WeightTag::UnitSymmetric, kInnerProductOrder);
  double total = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double half = 0.5 * (cuts[k + 1] - cuts[k]);
    const double mid = 0.5 * (cuts[k + 1] + cuts[k]);
    double piece = 0;
    for (int m = 0; m < rule.order; ++m) {
      piece += rule.weights[m] * std::max(g(mid + half * rule.nodes[m]), 0.0);
    }
    total += half * piece;
  }
  return total;
}

}  // namespace

TrueDensityKind parse_true_density_kind(std::string_view name) {
  if (name == "exp1-sine") return TrueDensityKind::Exp1Sine;
  if (name == "supp-exponential") return TrueDensityKind::SuppExponential;
  if (name == "supp-gaussian") return TrueDensityKind::SuppGaussian;
  if (name == "coefficients") return TrueDensityKind::CoefficientBacked;
  throw InputError("unknown true density '" + std::string(name) + "'");
}

std::string_view to_string(TrueDensityKind kind) {
  switch (kind) {
    case TrueDensityKind::Exp1Sine: return "exp1-sine";
    case TrueDensityKind::SuppExponential: return "supp-exponential";
    case TrueDensityKind::SuppGaussian: return "supp-gaussian";
    case TrueDensityKind::CoefficientBacked: return "coefficients";
  }
  return "?";
}

TrueDensitySpec TrueDensitySpec::build(TrueDensityKind kind, BasisFamily family) {
  TrueDensitySpec s;
  s.kind_ = kind;
  s.family_ = family;
  switch (kind) {
    case TrueDensityKind::Exp1Sine: {
      const WeightTag tag = family.weight_tag();
      if (tag != WeightTag::UnitSymmetric && tag != WeightTag::UnitInterval) {
        throw InputError("exp1-sine lives on [-1, 1] or its image [0, 1]");
      }
      const QuadratureRule& rule = cached_gauss_rule(WeightTag::UnitSymmetric, kDivergenceOrder);
      const double mass = integrate(exp1_sine_raw, rule);
      if (!(mass > 0)) throw NumericError("exp1-sine normalizer is not positive");
      s.c0_ = 1.0 / mass;
      const double c0 = s.c0_;
      if (tag == WeightTag::UnitSymmetric) {
        s.g0_ = [c0](double x) { return c0 * exp1_sine_raw(x); };
      } else {
        s.g0_ = [c0](double u) { return 2.0 * c0 * exp1_sine_raw(2.0 * u - 1.0); };
      }
      s.build_cdf_grid(family.domain(), kCdfGridPoints);
      break;
    }
    case TrueDensityKind::SuppExponential:
      if (family.weight_tag() != WeightTag::Exponential) {
        throw InputError("supp-exponential requires the Laguerre family");
      }
      s.g0_ = [](double x) { return 2.0 * std::exp(-x); };
      break;
    case TrueDensityKind::SuppGaussian:
      if (family.weight_tag() != WeightTag::Gaussian) {
        throw InputError("supp-gaussian requires the Hermite family");
      }
      s.g0_ = [](double x) { return std::sqrt(2.0 / std::numbers::pi) * std::exp(-x * x); };
      break;
    case TrueDensityKind::CoefficientBacked:
      throw InputError("use TrueDensitySpec::from_coefficients for coefficient-backed targets");
  }

  const Interval win = dense_grid_window(family.weight_tag());
  for (int i = 0; i < kValidationGridPoints; ++i) {
    const double x = win.lo + (win.hi - win.lo) * i / (kValidationGridPoints - 1);
    if (!(s.g0_(x) >= 0)) throw NumericError("true density is negative on the validation grid");
  }
  const double mass = integrate(s.g0_, cached_gauss_rule(family.weight_tag(), kDivergenceOrder));
  if (std::abs(mass - 1.0) > kMassTol) {
    throw NumericError("true density does not integrate to one: " + std::to_string(mass));
  }
  return s;
}

TrueDensitySpec TrueDensitySpec::from_coefficients(const CoefficientVector& eta) {
  if (eta.family().kind() == FamilyKind::GeneralizedLegendre) {
    throw CapabilityError("convert generalized Legendre coefficients before sampling");
  }
  TrueDensitySpec s;
  s.kind_ = TrueDensityKind::CoefficientBacked;
  s.family_ = eta.family();
  const BasisFamily family = eta.family();
  auto clamped = [eta](double x) { return std::max(evaluate(eta, x), 0.0); };
  const Interval win = dense_grid_window(family.weight_tag());
  bool negative = false;
  for (int i = 0; i < kValidationGridPoints && !negative; ++i) {
    const double x = win.lo + (win.hi - win.lo) * i / (kValidationGridPoints - 1);
    negative = evaluate(eta, x) < 0;
  }
  // A nonnegative expansion is exact under Gauss; a clamped one is not polynomial
  // and is integrated piecewise between its sign changes where the weight is flat.
  const auto raw = [eta](double x) { return evaluate(eta, x); };
  double mass = 0;
  if (!negative) {
    mass = integrate(clamped, cached_gauss_rule(family.weight_tag(), kDivergenceOrder));
  } else if (win.bounded() && (family.weight_tag() == WeightTag::UnitSymmetric ||
                               family.weight_tag() == WeightTag::UnitInterval)) {
    mass = clamped_mass_bounded(raw, win);
  } else {
    mass = dense_grid_integrate(clamped, family.weight_tag(), 16385);
  }
  if (!(mass > 0)) throw DegenerateNormalizationError("coefficient density has no positive mass");
  s.c0_ = 1.0 / mass;
  const double c0 = s.c0_;
  s.g0_ = [clamped, c0](double x) { return c0 * clamped(x); };
  s.build_cdf_grid(win, kCdfGridPoints);
  return s;
}

double TrueDensitySpec::lebesgue_density(double x) const {
  if (!family_.domain().contains(x)) return 0.0;
  return g0_(x) * weight_value(family_.weight_tag(), x);
}

void TrueDensitySpec::build_cdf_grid(Interval window, int points) {
  std::vector<double> xs(points);
  std::vector<double> cdf(points, 0.0);
  const double h = (window.hi - window.lo) / (points - 1);
  for (int i = 0; i < points; ++i) xs[i] = window.lo + h * i;
  xs.back() = window.hi;
  double prev = lebesgue_density(xs[0]);
  for (int i = 1; i < points; ++i) {
    const double cur = lebesgue_density(xs[i]);
    cdf[i] = cdf[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  const double total = cdf.back();
  if (!(total > 0)) throw NumericError("numeric CDF has no mass");
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  grid_x_ = std::make_shared<const std::vector<double>>(std::move(xs));
  grid_cdf_ = std::make_shared<const std::vector<double>>(std::move(cdf));
}

double TrueDensitySpec::cdf(double x) const {
  if (!grid_x_) {
    if (kind_ == TrueDensityKind::SuppExponential) return x <= 0 ? 0.0 : -std::expm1(-2.0 * x);
    return gaussian_cdf(x);
  }
  const auto& xs = *grid_x_;
  const auto& cs = *grid_cdf_;
  if (x <= xs.front()) return 0.0;
  if (x >= xs.back()) return 1.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = std::size_t(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return cs[i - 1] + t * (cs[i] - cs[i - 1]);
}

double TrueDensitySpec::inverse_cdf(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw InputError("inverse_cdf requires u in [0, 1]");
  if (!grid_x_) {
    if (kind_ == TrueDensityKind::SuppExponential) return -0.5 * std::log1p(-u);
    if (u == 0.0) return -std::numeric_limits<double>::infinity();
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    // Newton on the N(0, 1/4) CDF from a bracketed bisection start.
    double lo = -10.0, hi = 10.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (gaussian_cdf(mid) < u ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      const double pdf = std::sqrt(2.0 / std::numbers::pi) * std::exp(-2.0 * x * x);
      if (pdf <= 0) break;
      x -= (gaussian_cdf(x) - u) / pdf;
    }
    return x;
  }
  const auto& xs = *grid_x_;
  const auto& cs = *grid_cdf_;
  if (u <= 0.0) return xs.front();
  if (u >= 1.0) return xs.back();
  const auto it = std::lower_bound(cs.begin(), cs.end(), u);
  const std::size_t i = std::max<std::size_t>(1, std::size_t(it - cs.begin()));
  const double span = cs[i] - cs[i - 1];
  const double t = span > 0 ? (u - cs[i - 1]) / span : 0.0;
  return xs[i - 1] + t * (xs[i] - xs[i - 1]);
}

WeightedDensity TrueDensitySpec::as_weighted() const {
  return WeightedDensity::from_function(family_, g0_, std::string(to_string(kind_)));
}

std::vector<double> draw(const TrueDensitySpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("draw requires n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  switch (spec.kind()) {
    case TrueDensityKind::SuppExponential:
      for (double& y : out) y = -0.5 * std::log(uniform01(rng));
      break;
    case TrueDensityKind::SuppGaussian: {
      std::normal_distribution<double> normal(0.0, 0.5);
      for (double& y : out) y = normal(rng);
      break;
    }
    default:
      for (double& y : out) y = spec.inverse_cdf(uniform01(rng));
      break;
  }
  return out;
}

double ks_statistic(const TrueDensitySpec& spec, std::span<const double> sample) {
  if (sample.empty()) throw InputError("ks_statistic requires a nonempty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = double(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = spec.cdf(s[i]);
    d = std::max({d, (double(i) + 1.0) / n - f, f - double(i) / n});
  }
  return d;
}

}  // namespace polysieve
