#include "polysieve/density.hpp"

#include <cmath>
#include <vector>

#include "polysieve/errors.hpp"

namespace polysieve {

WeightedDensity::WeightedDensity(BasisFamily family, std::function<double(double)> fn,
                                 std::optional<CoefficientVector> coeffs, std::string label)
    : family_(family),
      fn_(std::move(fn)),
      coefficients_(std::move(coeffs)),
      label_(std::move(label)) {
  mass_ = integrate(fn_, cached_gauss_rule(family_.weight_tag(), kDivergenceOrder));
}

WeightedDensity WeightedDensity::from_coefficients(CoefficientVector eta) {
  auto fn = [eta](double x) { return evaluate(eta, x); };
  return WeightedDensity(eta.family(), std::move(fn), eta, "coefficients");
}

WeightedDensity WeightedDensity::from_function(BasisFamily family,
                                               std::function<double(double)> g,
                                               std::string label) {
  return WeightedDensity(family, std::move(g), std::nullopt, std::move(label));
}

WeightedDensity WeightedDensity::normalized() const {
  if (!(std::abs(mass_) > 1e-300)) throw DegenerateNormalizationError("density has zero mass");
  if (coefficients_) {
    std::vector<double> v(coefficients_->values().begin(), coefficients_->values().end());
    for (double& x : v) x /= mass_;
    return from_coefficients(CoefficientVector(family_, std::move(v)));
  }
  const double m = mass_;
  auto fn = fn_;
  return from_function(family_, [fn, m](double x) { return fn(x) / m; }, label_);
}

double evaluate(const CoefficientVector& eta, double x) {
  std::vector<double> q(eta.size());
  eta.family().eval_all(x, q);
  double s = 0;
  for (std::size_t j = 0; j < q.size(); ++j) s += eta[j] * q[j];
  return s;
}

CoefficientVector project(const WeightedDensity& g, BasisFamily family, int truncation,
                          int order) {
  if (truncation < 0) throw InputError("truncation must be nonnegative");
  if (truncation > kMaxDegree) throw CapabilityError("truncation exceeds the degree cap");
  if (g.family().weight_tag() != family.weight_tag()) {
    throw InputError("projection requires a density over the family's weight");
  }
  const auto& coeffs = g.coefficients();
  if (coeffs && coeffs->family() == family) {
    std::vector<double> v(truncation + 1, 0.0);
    for (std::size_t j = 0; j < v.size() && j < coeffs->size(); ++j) v[j] = (*coeffs)[j];
    return CoefficientVector(family, std::move(v));
  }
  if (family.kind() == FamilyKind::GeneralizedLegendre) {
    throw CapabilityError("generalized Legendre functions are not orthogonal; project onto Legendre");
  }
  const QuadratureRule& rule = cached_gauss_rule(family.weight_tag(), order);
  std::vector<double> theta(truncation + 1, 0.0);
  std::vector<double> q(truncation + 1);
  std::vector<double> comp(truncation + 1, 0.0);
  for (int k = 0; k < rule.order; ++k) {
    const double gx = g(rule.nodes[k]);
    if (!std::isfinite(gx)) throw NumericError("density not finite at a quadrature node");
    family.eval_all(rule.nodes[k], q);
    for (int j = 0; j <= truncation; ++j) {
      // Kahan summation per coefficient
      const double y = rule.weights[k] * gx * q[j] - comp[j];
      const double t = theta[j] + y;
      comp[j] = (t - theta[j]) - y;
      theta[j] = t;
    }
  }
  for (int j = 0; j <= truncation; ++j) theta[j] /= family.gamma(j);
  return CoefficientVector(family, std::move(theta));
}

Normalized normalize(const CoefficientVector& eta) {
  const double z = eta[0] * eta.family().gamma(0);
  if (std::abs(z) < 1e-12) {
    throw DegenerateNormalizationError("cannot normalize: |eta_0 gamma_0| < 1e-12");
  }
  if (eta.normalized() || z == 1.0) {
    return {CoefficientVector(eta.family(), {eta.values().begin(), eta.values().end()}, true), 1.0};
  }
  std::vector<double> v(eta.values().begin(), eta.values().end());
  for (double& x : v) x /= z;
  // Guard the flag against the last-ulp rounding of eta_0 / z.
  v[0] = 1.0 / eta.family().gamma(0);
  return {CoefficientVector(eta.family(), std::move(v), true), z};
}

void ShiftParams::validate() const {
  if (!(gamma_0 > 0)) throw InputError("shift requires gamma_0 > 0");
  if (!(a_n >= 0) || !(a_n < 1.0 / gamma_0)) {
    throw InputError("shift level a_n must lie in [0, 1/gamma_0)");
  }
}

CoefficientVector shift_coefficients(const CoefficientVector& eta, const ShiftParams& s) {
  s.validate();
  const double g0 = eta.family().gamma(0);
  if (std::abs(g0 - s.gamma_0) > 1e-14 * g0) {
    throw InputError("shift gamma_0 does not match the coefficient family");
  }
  if (std::abs(eta[0] * g0 - 1.0) > 1e-10) {
    throw InputError("shift_coefficients expects a normalized vector");
  }
  const double keep = 1.0 - s.a_n * s.gamma_0;
  std::vector<double> v(eta.size());
  v[0] = s.a_n + eta[0] * keep;
  for (std::size_t j = 1; j < v.size(); ++j) v[j] = eta[j] * keep;
  return CoefficientVector(eta.family(), std::move(v), true);
}

double shift_density_value(double g_val, const ShiftParams& s) {
  return s.a_n + g_val * (1.0 - s.a_n * s.gamma_0);
}

WeightedDensity shift_density(const WeightedDensity& g, const ShiftParams& s) {
  s.validate();
  const auto& c = g.coefficients();
  if (c && std::abs((*c)[0] * c->family().gamma(0) - 1.0) <= 1e-10) {
    return WeightedDensity::from_coefficients(shift_coefficients(*c, s));
  }
  return WeightedDensity::from_function(
      g.family(), [g, s](double x) { return shift_density_value(g(x), s); },
      g.label() + "+shift");
}

double max_shift_level(double K, double eps_n, double gamma_0) {
  if (!(K > 0) || !(eps_n > 0) || !(gamma_0 > 0)) {
    throw InputError("max_shift_level requires K, eps_n, gamma_0 > 0");
  }
  const double k4e4 = std::pow(K * eps_n, 4);
  return k4e4 / ((16.0 + k4e4) * gamma_0);
}

SieveMembership sieve_membership(const CoefficientVector& eta, double n, int p,
                                 GammaTildeMode mode) {
  if (!(n >= 1)) throw InputError("sample size must be >= 1");
  if (p < 1) throw InputError("smoothness p must be >= 1");
  const BasisFamily family = eta.family();
  double stat = eta[0] * eta[0] * family.gamma(0);
  for (std::size_t j = 1; j < eta.size(); ++j) {
    if (eta[j] == 0.0) continue;
    const double log_term =
        2.0 * std::log(std::abs(eta[j])) + log_gamma_tilde(family, int(j), p, mode);
    stat += std::exp(log_term);
  }
  const double threshold = std::pow(n, 1.0 / (2.0 * p + 1.0));
  return {stat <= threshold, stat, threshold};
}

}  // namespace polysieve
