#include "polysieve/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polysieve/errors.hpp"
#include "polysieve/quadrature.hpp"

namespace polysieve {

namespace {

// q_{j+1} = (A x + B) q_j - C q_{j-1}
template <class Real = double>
struct Recurrence {
  Real a;
  Real b;
  Real c;
};

template <class Real = double>
Recurrence<Real> recurrence(FamilyKind kind, int j) {
  const Real jd = j;
  switch (kind) {
    case FamilyKind::Legendre:
    case FamilyKind::GeneralizedLegendre:
      return {(2 * jd + 1) / (jd + 1), Real(0), jd / (jd + 1)};
    case FamilyKind::Hermite:
      return {Real(2), Real(0), 2 * jd};
    case FamilyKind::Laguerre:
      return {Real(-1) / (jd + 1), (2 * jd + 1) / (jd + 1), jd / (jd + 1)};
    case FamilyKind::Trigonometric:
      break;
  }
  throw CapabilityError("trigonometric basis has no three-term recurrence");
}

// Plain orthogonal-polynomial kind used by the recurrence (GL shares Legendre's).
FamilyKind recurrence_kind(FamilyKind kind) {
  return kind == FamilyKind::GeneralizedLegendre ? FamilyKind::Legendre : kind;
}

template <class Real>
Real recurrence_eval(FamilyKind kind, int j, Real x) {
  Real prev = 0;
  Real cur = 1;
  for (int i = 0; i < j; ++i) {
    const auto r = recurrence<Real>(kind, i);
    const Real next = (r.a * x + r.b) * cur - r.c * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <class Real>
Real recurrence_derivative(FamilyKind kind, int j, int l, Real x) {
  if (l > j) return 0;
  if (l == 0) return recurrence_eval(kind, j, x);
  std::vector<Real> prev(l + 1, Real(0));
  std::vector<Real> cur(l + 1, Real(0));
  std::vector<Real> next(l + 1, Real(0));
  cur[0] = 1;
  for (int i = 0; i < j; ++i) {
    const auto r = recurrence<Real>(kind, i);
    for (int k = 0; k <= l; ++k) {
      Real v = (r.a * x + r.b) * cur[k] - r.c * prev[k];
      if (k > 0) v += Real(k) * r.a * cur[k - 1];
      next[k] = v;
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return cur[l];
}

template <class Real>
Real trig_eval(int j, int l, Real x) {
  if (j == 0) return l == 0 ? Real(1) : Real(0);
  const int freq = (j + 1) / 2;
  const Real omega = Real(2) * std::numbers::pi_v<Real> * Real(freq);
  const Real phase = omega * x + Real(l) * std::numbers::pi_v<Real> / Real(2);
  const Real amp = std::sqrt(Real(2)) * std::pow(omega, Real(l));
  return (j % 2 == 1) ? amp * std::sin(phase) : amp * std::cos(phase);
}

template <class Real>
Real family_derivative(FamilyKind kind, int j, int l, Real x) {
  switch (kind) {
    case FamilyKind::Legendre:
    case FamilyKind::Hermite:
    case FamilyKind::Laguerre:
      return recurrence_derivative(kind, j, l, x);
    case FamilyKind::GeneralizedLegendre: {
      Real v = recurrence_derivative(FamilyKind::Legendre, j, l, x);
      if (j >= 2) v -= recurrence_derivative(FamilyKind::Legendre, j - 2, l, x);
      return v / std::sqrt(Real(4 * j + 6));
    }
    case FamilyKind::Trigonometric:
      return trig_eval(j, l, x);
  }
  return 0;
}

double log_sum_exp(const std::vector<double>& terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  if (!std::isfinite(mx)) return mx;
  double s = 0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

// log|a_ij^{(l)}| for i < j; -inf marks exact zeros.
std::vector<double> log_abs_derivative_coeffs(BasisFamily family, int j, int l) {
  std::vector<double> out(j, -std::numeric_limits<double>::infinity());
  if (family.kind() == FamilyKind::Hermite) {
    double log_a = l * std::numbers::ln2;
    log_a += std::lgamma(j + 1.0) - std::lgamma(j - l + 1.0);
    out[j - l] = log_a;
    return out;
  }
  const auto a = derivative_coeffs(family, j, l);
  for (int i = 0; i < j; ++i) {
    if (a[i] != 0.0) out[i] = std::log(std::abs(a[i]));
  }
  return out;
}

}  // namespace

BasisFamily BasisFamily::parse(std::string_view name) {
  if (name == "legendre") return legendre();
  if (name == "generalized-legendre" || name == "generalized_legendre") {
    return generalized_legendre();
  }
  if (name == "hermite") return hermite();
  if (name == "laguerre") return laguerre();
  if (name == "trig" || name == "trigonometric") return trigonometric();
  throw InputError("unknown basis family '" + std::string(name) + "'");
}

std::string_view BasisFamily::name() const {
  switch (kind_) {
    case FamilyKind::Legendre: return "legendre";
    case FamilyKind::GeneralizedLegendre: return "generalized-legendre";
    case FamilyKind::Hermite: return "hermite";
    case FamilyKind::Laguerre: return "laguerre";
    case FamilyKind::Trigonometric: return "trig";
  }
  return "?";
}

WeightTag BasisFamily::weight_tag() const {
  switch (kind_) {
    case FamilyKind::Legendre:
    case FamilyKind::GeneralizedLegendre:
      return WeightTag::UnitSymmetric;
    case FamilyKind::Hermite: return WeightTag::Gaussian;
    case FamilyKind::Laguerre: return WeightTag::Exponential;
    case FamilyKind::Trigonometric: return WeightTag::UnitInterval;
  }
  return WeightTag::UnitSymmetric;
}

Interval BasisFamily::domain() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (weight_tag()) {
    case WeightTag::UnitSymmetric: return {-1.0, 1.0};
    case WeightTag::Gaussian: return {-inf, inf};
    case WeightTag::Exponential: return {0.0, inf};
    case WeightTag::UnitInterval: return {0.0, 1.0};
  }
  return {-1.0, 1.0};
}

void BasisFamily::check_degree(int j) const {
  if (j < 0) throw InputError("basis index must be nonnegative");
  if (j > kMaxDegree) {
    std::ostringstream msg;
    msg << "basis index " << j << " exceeds the supported maximum " << kMaxDegree;
    throw CapabilityError(msg.str());
  }
}

void BasisFamily::check_domain(double x) const {
  const Interval d = domain();
  if (std::isnan(x) || !d.contains(x) || std::isinf(x)) {
    std::ostringstream msg;
    msg << "point " << x << " lies outside the " << name() << " domain";
    throw InputError(msg.str());
  }
}

double BasisFamily::eval(int j, double x) const {
  check_degree(j);
  check_domain(x);
  return family_derivative<double>(kind_, j, 0, x);
}

long double BasisFamily::eval_extended(int j, long double x) const {
  check_degree(j);
  check_domain(static_cast<double>(x));
  return family_derivative<long double>(kind_, j, 0, x);
}

void BasisFamily::eval_all(double x, std::span<double> out) const {
  if (out.empty()) return;
  check_degree(static_cast<int>(out.size()) - 1);
  check_domain(x);
  if (kind_ == FamilyKind::Trigonometric) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = trig_eval<double>(int(j), 0, x);
    return;
  }
  const FamilyKind rk = recurrence_kind(kind_);
  // Legendre values up to index size-1 are needed for GL as well.
  double prev = 0;
  double cur = 1;
  std::vector<double> legendre_vals;
  if (kind_ == FamilyKind::GeneralizedLegendre) legendre_vals.resize(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (kind_ == FamilyKind::GeneralizedLegendre) {
      legendre_vals[j] = cur;
    } else {
      out[j] = cur;
    }
    const auto r = recurrence(rk, static_cast<int>(j));
    const double next = (r.a * x + r.b) * cur - r.c * prev;
    prev = cur;
    cur = next;
  }
  if (kind_ == FamilyKind::GeneralizedLegendre) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      double v = legendre_vals[j];
      if (j >= 2) v -= legendre_vals[j - 2];
      out[j] = v / std::sqrt(4.0 * double(j) + 6.0);
    }
  }
}

double BasisFamily::derivative(int j, int l, double x) const {
  check_degree(j);
  check_domain(x);
  if (l < 0) throw InputError("derivative order must be nonnegative");
  return family_derivative<double>(kind_, j, l, x);
}

double BasisFamily::weight(double x) const {
  check_domain(x);
  return weight_value(weight_tag(), x);
}

double BasisFamily::gamma(int j) const {
  check_degree(j);
  switch (kind_) {
    case FamilyKind::Legendre:
    case FamilyKind::GeneralizedLegendre:
      return 2.0 / (2.0 * j + 1.0);
    case FamilyKind::Hermite: {
      double g = std::sqrt(std::numbers::pi);
      for (int i = 1; i <= j; ++i) g *= 2.0 * i;
      if (!std::isfinite(g)) {
        throw CapabilityError("hermite gamma_" + std::to_string(j) +
                              " overflows binary64; use log_gamma");
      }
      return g;
    }
    case FamilyKind::Laguerre:
    case FamilyKind::Trigonometric:
      return 1.0;
  }
  return 1.0;
}

double BasisFamily::log_gamma(int j) const {
  check_degree(j);
  if (kind_ == FamilyKind::Hermite) {
    return j * std::numbers::ln2 + std::lgamma(j + 1.0) + 0.5 * std::log(std::numbers::pi);
  }
  return std::log(gamma(j));
}

double eval(BasisFamily family, int j, double x) { return family.eval(j, x); }
double weight(BasisFamily family, double x) { return family.weight(x); }
double gamma(BasisFamily family, int j) { return family.gamma(j); }

std::vector<double> derivative_coeffs(BasisFamily family, int j, int l) {
  if (l <= 0) throw InputError("derivative order l must be >= 1");
  if (l > j) throw InputError("derivative order l must not exceed the degree j");
  if (j > kMaxDegree) throw CapabilityError("degree exceeds the supported maximum");

  switch (family.kind()) {
    case FamilyKind::Legendre: {
      // P_k' = sum_{i<k, k-i odd} (2i+1) P_i, applied l times.
      std::vector<double> c(j + 1, 0.0);
      c[j] = 1.0;
      for (int step = 0; step < l; ++step) {
        std::vector<double> d(j + 1, 0.0);
        for (int i = 0; i <= j; ++i) {
          double s = 0;
          for (int k = i + 1; k <= j; k += 2) s += c[k];
          d[i] = (2.0 * i + 1.0) * s;
        }
        c = std::move(d);
      }
      c.resize(j);
      return c;
    }
    case FamilyKind::Hermite: {
      std::vector<double> a(j, 0.0);
      double v = 1.0;
      for (int t = 0; t < l; ++t) v *= 2.0 * (j - t);
      if (!std::isfinite(v)) throw CapabilityError("hermite derivative coefficient overflows");
      a[j - l] = v;
      return a;
    }
    case FamilyKind::Laguerre: {
      const QuadratureRule& rule = cached_gauss_rule(family.weight_tag(), j + 1);
      std::vector<double> a(j, 0.0);
      for (int i = 0; i < j; ++i) {
        long double s = 0;
        for (int k = 0; k < rule.order; ++k) {
          const long double x = rule.nodes_ext[k];
          s += rule.weights_ext[k] * recurrence_derivative<long double>(family.kind(), j, l, x) *
               recurrence_eval<long double>(family.kind(), i, x);
        }
        a[i] = static_cast<double>(s / family.gamma(i));
      }
      return a;
    }
    case FamilyKind::GeneralizedLegendre:
      throw CapabilityError(
          "derivative coefficients are defined for the orthogonal Legendre system; "
          "convert generalized Legendre coefficients first");
    case FamilyKind::Trigonometric:
      throw CapabilityError("trigonometric derivatives are not spanned by lower indices");
  }
  return {};
}

double log_gamma_tilde(BasisFamily family, int j, int p, GammaTildeMode mode) {
  if (j < 1) throw InputError("gamma_tilde requires j >= 1");
  if (p < 1) throw InputError("gamma_tilde requires p >= 1");
  if (family.kind() == FamilyKind::GeneralizedLegendre ||
      family.kind() == FamilyKind::Trigonometric) {
    throw CapabilityError("gamma_tilde is defined for orthogonal polynomial families only");
  }

  std::vector<double> log_gamma_i(j);
  for (int i = 0; i < j; ++i) log_gamma_i[i] = family.log_gamma(i);

  double best = 4.0 * std::log(double(j)) + *std::max_element(log_gamma_i.begin(), log_gamma_i.end());
  for (int l = 1; l <= std::min(j, p); ++l) {
    const auto log_a = log_abs_derivative_coeffs(family, j, l);
    std::vector<double> terms;
    terms.reserve(j);
    for (int i = 0; i < j; ++i) {
      if (std::isfinite(log_a[i])) terms.push_back(4.0 * log_a[i] + log_gamma_i[i]);
    }
    best = std::max(best, log_sum_exp(terms));
  }
  if (mode == GammaTildeMode::Sieve) {
    best = std::max(best, 7.0 * p * std::log(double(j)) + family.log_gamma(j));
  }
  return best;
}

double gamma_tilde(BasisFamily family, int j, int p, GammaTildeMode mode) {
  const double v = std::exp(log_gamma_tilde(family, j, p, mode));
  if (!std::isfinite(v)) throw CapabilityError("gamma_tilde overflows binary64; use log form");
  return v;
}

}  // namespace polysieve
