#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polysieve {

enum class FamilyKind : std::uint8_t {
  Legendre,
  GeneralizedLegendre,
  Hermite,
  Laguerre,
  Trigonometric,
};

// Identifies the reference measure w(x) dx.
enum class WeightTag : std::uint8_t {
  UnitSymmetric,  // w = 1 on [-1, 1]
  Gaussian,       // w = exp(-x^2) on R
  Exponential,    // w = exp(-x) on [0, inf)
  UnitInterval,   // w = 1 on [0, 1]
};

struct Interval {
  double lo;
  double hi;

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

inline constexpr int kMaxDegree = 200;

/// An orthogonal system {q_j} together with its weight, domain and
/// normalization constants gamma_j = int q_j^2 w dx.
///
/// Immutable value type; all member functions are safe to call concurrently.
class BasisFamily {
 public:
  constexpr explicit BasisFamily(FamilyKind kind) : kind_(kind) {}

  static constexpr BasisFamily legendre() { return BasisFamily(FamilyKind::Legendre); }
  static constexpr BasisFamily generalized_legendre() {
    return BasisFamily(FamilyKind::GeneralizedLegendre);
  }
  static constexpr BasisFamily hermite() { return BasisFamily(FamilyKind::Hermite); }
  static constexpr BasisFamily laguerre() { return BasisFamily(FamilyKind::Laguerre); }
  static constexpr BasisFamily trigonometric() {
    return BasisFamily(FamilyKind::Trigonometric);
  }

  /// Accepts "legendre", "generalized-legendre", "hermite", "laguerre", "trig".
  static BasisFamily parse(std::string_view name);

  constexpr FamilyKind kind() const { return kind_; }
  std::string_view name() const;
  WeightTag weight_tag() const;
  Interval domain() const;
  bool is_polynomial() const { return kind_ != FamilyKind::Trigonometric; }

  /// q_j(x) by three-term recurrence (or the closed trigonometric form).
  double eval(int j, double x) const;
  long double eval_extended(int j, long double x) const;

  /// Fills out[j] = q_j(x) for j = 0 .. out.size()-1 in one recurrence sweep.
  void eval_all(double x, std::span<double> out) const;

  /// l-th derivative q_j^{(l)}(x), obtained by differentiating the recurrence.
  double derivative(int j, int l, double x) const;

  double weight(double x) const;

  /// Closed-form gamma_j. Throws CapabilityError when it overflows binary64.
  double gamma(int j) const;
  /// log(gamma_j); finite for every supported degree.
  double log_gamma(int j) const;

  friend constexpr bool operator==(BasisFamily, BasisFamily) = default;

 private:
  void check_degree(int j) const;
  void check_domain(double x) const;

  FamilyKind kind_;
};

// Free-function forms of the basic operations.
double eval(BasisFamily family, int j, double x);
double weight(BasisFamily family, double x);
double gamma(BasisFamily family, int j);

/// Row (a_{0j}^{(l)}, ..., a_{(j-1)j}^{(l)}) of the expansion
/// q_j^{(l)} = sum_{i<j} a_{ij}^{(l)} q_i. Requires 1 <= l <= j.
///
/// Legendre iterates the exact derivative recurrence, Hermite uses the closed
/// form 2^l j!/(j-l)! on i = j-l, Laguerre projects by Gauss quadrature.
std::vector<double> derivative_coeffs(BasisFamily family, int j, int l);

enum class GammaTildeMode : std::uint8_t { Lemma, Sieve };

/// Growth weight for the Sobolev-type constraint sum eta_j^2 gamma~_j < inf.
///
/// Lemma: max{ max_{1<=l<=min(j,p)} sum_{i<j} (a_ij^{(l)})^4 gamma_i,
///             j^4 max_{i<j} gamma_i }.
/// Sieve: max(Lemma, j^{7p} gamma_j).
double gamma_tilde(BasisFamily family, int j, int p, GammaTildeMode mode);
double log_gamma_tilde(BasisFamily family, int j, int p, GammaTildeMode mode);

/// Largest Gauss rule order accepted by gauss_rule().
inline constexpr int kMaxRuleOrder = 256;

}  // namespace polysieve
