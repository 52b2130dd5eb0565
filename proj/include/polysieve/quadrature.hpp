#pragma once

#include <functional>
#include <vector>

#include "polysieve/basis.hpp"

namespace polysieve {

/// m-point Gauss rule for one of the reference weights.
///
/// Nodes are sorted ascending and strictly inside the domain; weights are
/// positive. The extended-precision arrays are what the double arrays were
/// rounded from and are used where binary64 cancellation is too coarse.
struct QuadratureRule {
  WeightTag weight = WeightTag::UnitSymmetric;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<long double> nodes_ext;
  std::vector<long double> weights_ext;
};

/// Golub-Welsch eigenvalues of the Jacobi matrix, refined by Newton steps on
/// the orthonormal degree-m polynomial, with Christoffel-number weights.
/// Requires 1 <= m <= kMaxRuleOrder.
QuadratureRule gauss_rule(WeightTag weight, int m);

/// Process-wide cache over gauss_rule(); returned references stay valid.
const QuadratureRule& cached_gauss_rule(WeightTag weight, int m);

/// sum_k w_k f(x_k) with Neumaier compensated summation.
/// Throws NumericError naming the node when f is not finite there.
double integrate(const std::function<double(double)>& f, const QuadratureRule& rule);
long double integrate_extended(const std::function<long double(long double)>& f,
                               const QuadratureRule& rule);

/// Interval covered by the dense-grid fallback: the whole domain when it is
/// bounded, otherwise a window holding at least 1 - 1e-12 of the weight mass.
Interval dense_grid_window(WeightTag weight);

/// int f(x) w(x) dx by composite Simpson on `points` (rounded up to odd)
/// equispaced nodes across dense_grid_window().
double dense_grid_integrate(const std::function<double(double)>& f, WeightTag weight,
                            int points = 4097);

double weight_value(WeightTag weight, double x);

inline constexpr int kInnerProductOrder = 64;
inline constexpr int kDivergenceOrder = 128;

}  // namespace polysieve
