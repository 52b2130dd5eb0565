#include "polysieve/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "polysieve/errors.hpp"

namespace polysieve {

namespace {

using Real = long double;

// Recurrence of the orthonormal polynomials:
// b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1},  p_0 = 1/sqrt(mu0).
struct Jacobi {
  std::vector<Real> diag;     // a_0 .. a_{m-1}
  std::vector<Real> offdiag;  // b_1 .. b_m (b_m only used for Newton)
  Real mu0;
};

Jacobi jacobi(WeightTag weight, int m) {
  Jacobi J;
  J.diag.resize(m);
  J.offdiag.resize(m);
  switch (weight) {
    case WeightTag::UnitSymmetric:
    case WeightTag::UnitInterval:
      for (int k = 0; k < m; ++k) {
        const Real kk = k + 1;
        J.diag[k] = 0;
        J.offdiag[k] = kk / std::sqrt(4 * kk * kk - 1);
      }
      J.mu0 = 2;
      break;
    case WeightTag::Gaussian:
      for (int k = 0; k < m; ++k) {
        J.diag[k] = 0;
        J.offdiag[k] = std::sqrt(Real(k + 1) / 2);
      }
      J.mu0 = std::sqrt(std::numbers::pi_v<Real>);
      break;
    case WeightTag::Exponential:
      for (int k = 0; k < m; ++k) {
        J.diag[k] = 2 * Real(k) + 1;
        J.offdiag[k] = Real(k + 1);
      }
      J.mu0 = 1;
      break;
  }
  return J;
}

// Returns (p_m(x), p_m'(x), sum_{k<m} p_k(x)^2).
struct OrthoEval {
  Real value;
  Real slope;
  Real sum_sq;
};

OrthoEval ortho_eval(const Jacobi& J, int m, Real x) {
  Real p_prev = 0, p = 1 / std::sqrt(J.mu0);
  Real d_prev = 0, d = 0;
  Real sum_sq = 0;
  for (int k = 0; k < m; ++k) {
    sum_sq += p * p;
    const Real b_prev = k == 0 ? Real(0) : J.offdiag[k - 1];
    const Real p_next = ((x - J.diag[k]) * p - b_prev * p_prev) / J.offdiag[k];
    const Real d_next = ((x - J.diag[k]) * d + p - b_prev * d_prev) / J.offdiag[k];
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d, sum_sq};
}

}  // namespace

double weight_value(WeightTag weight, double x) {
  switch (weight) {
    case WeightTag::UnitSymmetric:
    case WeightTag::UnitInterval:
      return 1.0;
    case WeightTag::Gaussian:
      return std::exp(-x * x);
    case WeightTag::Exponential:
      return std::exp(-x);
  }
  return 1.0;
}

QuadratureRule gauss_rule(WeightTag weight, int m) {
  if (m < 1 || m > kMaxRuleOrder) {
    std::ostringstream msg;
    msg << "Gauss rule order " << m << " outside [1, " << kMaxRuleOrder << "]";
    throw CapabilityError(msg.str());
  }
  const Jacobi J = jacobi(weight, m);

  std::vector<Real> x(m);
  if (m == 1) {
    x[0] = J.diag[0];
  } else {
    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    Vec d(m), e(m - 1);
    for (int k = 0; k < m; ++k) d[k] = J.diag[k];
    for (int k = 0; k + 1 < m; ++k) e[k] = J.offdiag[k];
    Eigen::SelfAdjointEigenSolver<Mat> solver;
    solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("Jacobi eigenvalue solve failed");
    for (int k = 0; k < m; ++k) x[k] = solver.eigenvalues()[k];
  }

  QuadratureRule rule;
  rule.weight = weight;
  rule.order = m;
  rule.nodes_ext.resize(m);
  rule.weights_ext.resize(m);
  for (int k = 0; k < m; ++k) {
    Real xk = x[k];
    for (int it = 0; it < 3; ++it) {
      const OrthoEval e = ortho_eval(J, m, xk);
      if (e.slope == 0 || !std::isfinite(e.slope)) break;
      const Real step = e.value / e.slope;
      if (!std::isfinite(step)) break;
      xk -= step;
      if (std::abs(step) <= std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(xk))) {
        break;
      }
    }
    rule.nodes_ext[k] = xk;
    rule.weights_ext[k] = 1 / ortho_eval(J, m, xk).sum_sq;
  }
  // symmetric weights: exact symmetry of nodes
  if (weight != WeightTag::Exponential) {
    for (int k = 0; k < m / 2; ++k) {
      const Real a = (rule.nodes_ext[m - 1 - k] - rule.nodes_ext[k]) / 2;
      const Real w = (rule.weights_ext[m - 1 - k] + rule.weights_ext[k]) / 2;
      rule.nodes_ext[k] = -a;
      rule.nodes_ext[m - 1 - k] = a;
      rule.weights_ext[k] = rule.weights_ext[m - 1 - k] = w;
    }
    if (m % 2 == 1) rule.nodes_ext[m / 2] = 0;
  }
  if (weight == WeightTag::UnitInterval) {
    for (int k = 0; k < m; ++k) {
      rule.nodes_ext[k] = (rule.nodes_ext[k] + 1) / 2;
      rule.weights_ext[k] /= 2;
    }
  }
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int k = 0; k < m; ++k) {
    rule.nodes[k] = static_cast<double>(rule.nodes_ext[k]);
    rule.weights[k] = static_cast<double>(rule.weights_ext[k]);
  }
  return rule;
}

const QuadratureRule& cached_gauss_rule(WeightTag weight, int m) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{static_cast<int>(weight), m}];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_rule(weight, m));
  return *slot;
}

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double sum = 0;
  double comp = 0;
  for (int k = 0; k < rule.order; ++k) {
    const double fx = f(rule.nodes[k]);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at node x = " << rule.nodes[k];
      throw NumericError(msg.str());
    }
    const double term = rule.weights[k] * fx;
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

long double integrate_extended(const std::function<long double(long double)>& f,
                               const QuadratureRule& rule) {
  long double sum = 0;
  for (int k = 0; k < rule.order; ++k) {
    const long double fx = f(rule.nodes_ext[k]);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at node x = " << rule.nodes[k];
      throw NumericError(msg.str());
    }
    sum += rule.weights_ext[k] * fx;
  }
  return sum;
}

Interval dense_grid_window(WeightTag weight) {
  switch (weight) {
    case WeightTag::UnitSymmetric: return {-1.0, 1.0};
    case WeightTag::UnitInterval: return {0.0, 1.0};
    // erfc(7) ~ 4e-23 and exp(-40) ~ 4e-18 of the weight mass lie outside.
    case WeightTag::Gaussian: return {-7.0, 7.0};
    case WeightTag::Exponential: return {0.0, 40.0};
  }
  return {-1.0, 1.0};
}

double dense_grid_integrate(const std::function<double(double)>& f, WeightTag weight,
                            int points) {
  if (points < 3) throw InputError("dense grid needs at least 3 points");
  if (points % 2 == 0) ++points;
  const Interval win = dense_grid_window(weight);
  const int intervals = points - 1;
  const double h = (win.hi - win.lo) / intervals;
  double sum = 0;
  for (int i = 0; i <= intervals; ++i) {
    const double x = (i == intervals) ? win.hi : win.lo + i * h;
    const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double v = f(x) * weight_value(weight, x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrand is not finite at grid point x = " << x;
      throw NumericError(msg.str());
    }
    sum += c * v;
  }
  return sum * h / 3.0;
}

}  // namespace polysieve
