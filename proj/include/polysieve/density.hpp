#pragma once

#include <functional>
#include <optional>
#include <string>

#include "polysieve/basis.hpp"
#include "polysieve/coefficients.hpp"
#include "polysieve/quadrature.hpp"

namespace polysieve {

/// A density g relative to the measure w(x) dx of a basis family.
///
/// Either backed by a CoefficientVector (raw expansion, may dip below zero)
/// or by a closed-form callable. The mass int g w dx is computed once at
/// construction with the family's Gauss rule.
class WeightedDensity {
 public:
  static WeightedDensity from_coefficients(CoefficientVector eta);
  static WeightedDensity from_function(BasisFamily family, std::function<double(double)> g,
                                       std::string label = "closed-form");

  double operator()(double x) const { return fn_(x); }
  BasisFamily family() const { return family_; }
  const std::optional<CoefficientVector>& coefficients() const { return coefficients_; }
  const std::string& label() const { return label_; }
  double mass() const { return mass_; }

  /// Same density divided by its mass.
  WeightedDensity normalized() const;

 private:
  WeightedDensity(BasisFamily family, std::function<double(double)> fn,
                  std::optional<CoefficientVector> coeffs, std::string label);

  BasisFamily family_;
  std::function<double(double)> fn_;
  std::optional<CoefficientVector> coefficients_;
  std::string label_;
  double mass_ = 0;
};

/// sum_{j<=N} eta_j q_j(x); raw, possibly negative.
double evaluate(const CoefficientVector& eta, double x);

/// theta_j = (1/gamma_j) int g q_j w dx for j = 0..N.
CoefficientVector project(const WeightedDensity& g, BasisFamily family, int truncation,
                          int order = kInnerProductOrder);

struct Normalized {
  CoefficientVector eta;
  double scale;  // Z = eta_0 gamma_0
};

/// Divides by Z = eta_0 gamma_0. Throws DegenerateNormalizationError when |Z| < 1e-12.
Normalized normalize(const CoefficientVector& eta);

/// Shift level a_n and the family's gamma_0; requires 0 <= a_n < 1/gamma_0.
struct ShiftParams {
  double a_n = 0;
  double gamma_0 = 1;

  void validate() const;
};

/// Coefficients of a_n + g (1 - a_n gamma_0). Requires a normalized input.
CoefficientVector shift_coefficients(const CoefficientVector& eta, const ShiftParams& s);
double shift_density_value(double g_val, const ShiftParams& s);
WeightedDensity shift_density(const WeightedDensity& g, const ShiftParams& s);

/// Largest admissible a_n: K^4 eps^4 / ((16 + K^4 eps^4) gamma_0).
double max_shift_level(double K, double eps_n, double gamma_0);

struct SieveMembership {
  bool member;
  double statistic;  // sum_j eta_j^2 gamma~_j with gamma~_0 = gamma_0
  double threshold;  // n^{1/(2p+1)}
};

SieveMembership sieve_membership(const CoefficientVector& eta, double n, int p,
                                 GammaTildeMode mode);

}  // namespace polysieve
