#include "polysieve/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"

namespace polysieve {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kSupportTol = 1e-12;

void check_compatible(const WeightedDensity& g1, const WeightedDensity& g2) {
  if (g1.family().weight_tag() != g2.family().weight_tag()) {
    throw InputError("densities live on different weights/domains");
  }
}

struct LogRatioMoments {
  double first = 0;   // E_{g1}[log g1 - log g2]
  double second = 0;  // E_{g1}[(log g1 - log g2)^2]
  bool infinite = false;
};

LogRatioMoments log_ratio_moments(const WeightedDensity& g1, const WeightedDensity& g2,
                                  int order) {
  check_compatible(g1, g2);
  const QuadratureRule& rule = cached_gauss_rule(g1.family().weight_tag(), order);
  LogRatioMoments m;
  for (int k = 0; k < rule.order; ++k) {
    const double x = rule.nodes[k];
    const double a = std::max(g1(x), 0.0);
    const double b = std::max(g2(x), 0.0);
    if (a <= 0.0) continue;
    if (a > kSupportTol && b <= kLogFloor) {
      m.infinite = true;
      return m;
    }
    const double r = std::log(std::max(a, kLogFloor)) - std::log(std::max(b, kLogFloor));
    m.first += rule.weights[k] * a * r;
    m.second += rule.weights[k] * a * r * r;
  }
  return m;
}

double clamp_mass(const WeightedDensity& g, const QuadratureRule& rule) {
  double s = 0;
  for (int k = 0; k < rule.order; ++k) s += rule.weights[k] * std::max(-g(rule.nodes[k]), 0.0);
  return s;
}

}  // namespace

double hellinger_sq(const WeightedDensity& g1, const WeightedDensity& g2, int order) {
  check_compatible(g1, g2);
  const QuadratureRule& rule = cached_gauss_rule(g1.family().weight_tag(), order);
  const double h2 = integrate(
      [&](double x) {
        const double d = std::sqrt(std::max(g1(x), 0.0)) - std::sqrt(std::max(g2(x), 0.0));
        return d * d;
      },
      rule);
  return std::clamp(h2, 0.0, 2.0);
}

double kl(const WeightedDensity& g1, const WeightedDensity& g2, int order) {
  const auto m = log_ratio_moments(g1, g2, order);
  if (m.infinite) return std::numeric_limits<double>::infinity();
  return m.first;
}

double log_var(const WeightedDensity& g1, const WeightedDensity& g2, int order) {
  const auto m = log_ratio_moments(g1, g2, order);
  if (m.infinite) return std::numeric_limits<double>::infinity();
  return m.second - m.first * m.first;
}

DivergenceReport divergences(const WeightedDensity& g1, const WeightedDensity& g2,
                             const DivergenceOptions& options) {
  check_compatible(g1, g2);
  DivergenceReport r;
  r.order = options.order;
  r.hellinger_sq = hellinger_sq(g1, g2, options.order);
  const auto m = log_ratio_moments(g1, g2, options.order);
  r.kl_infinite = m.infinite;
  if (m.infinite) {
    r.kl = std::numeric_limits<double>::infinity();
    r.log_var = std::numeric_limits<double>::infinity();
  } else {
    // Quadrature noise can leave tiny negatives; reports clamp them.
    r.kl = std::max(m.first, 0.0);
    r.log_var = std::max(m.second - m.first * m.first, 0.0);
  }
  const QuadratureRule& rule = cached_gauss_rule(g1.family().weight_tag(), options.order);
  r.clamp_mass = clamp_mass(g1, rule) + clamp_mass(g2, rule);
  if (options.cross_check) {
    const double dense = dense_grid_integrate(
        [&](double x) {
          const double d = std::sqrt(std::max(g1(x), 0.0)) - std::sqrt(std::max(g2(x), 0.0));
          return d * d;
        },
        g1.family().weight_tag(), options.grid_points);
    r.discrepancy = std::abs(dense - r.hellinger_sq);
  }
  r.warning = r.discrepancy > 1e-6 || r.clamp_mass > 1e-6;
  return r;
}

std::string to_csv_row(const DivergenceReport& report) {
  std::string out = format_double(report.hellinger_sq);
  out += ',' + format_double(report.kl);
  out += ',' + format_double(report.log_var);
  out += ',' + std::to_string(report.order);
  out += ',' + format_double(report.discrepancy);
  return out;
}

}  // namespace polysieve
