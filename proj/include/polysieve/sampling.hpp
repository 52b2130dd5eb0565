#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "polysieve/density.hpp"

namespace polysieve {

enum class TrueDensityKind : std::uint8_t {
  Exp1Sine,         // c0 (exp(sin(pi (x+1)/2)) - 1) on [-1, 1], w = 1
  SuppExponential,  // 2 exp(-x) against w = exp(-x)
  SuppGaussian,     // sqrt(2/pi) exp(-x^2) against w = exp(-x^2)
  CoefficientBacked,
};

TrueDensityKind parse_true_density_kind(std::string_view name);
std::string_view to_string(TrueDensityKind kind);

/// A target density g0 relative to w, plus its CDF machinery for drawing.
///
/// Construction verifies g0 >= 0 on a 2048-point grid and int g0 w = 1 +- 1e-8.
/// Exp1Sine with the trigonometric family is the same law mapped to [0, 1].
class TrueDensitySpec {
 public:
  static TrueDensitySpec build(TrueDensityKind kind, BasisFamily family);
  /// Negative parts of the expansion are clamped to zero and the result renormalized.
  static TrueDensitySpec from_coefficients(const CoefficientVector& eta);

  TrueDensityKind kind() const { return kind_; }
  BasisFamily family() const { return family_; }
  double c0() const { return c0_; }

  /// g0(x), relative to w.
  double operator()(double x) const { return g0_(x); }
  /// g0(x) w(x): the Lebesgue density the observations follow.
  double lebesgue_density(double x) const;

  double cdf(double x) const;
  double inverse_cdf(double u) const;

  WeightedDensity as_weighted() const;

 private:
  TrueDensitySpec() = default;
  void build_cdf_grid(Interval window, int points);

  TrueDensityKind kind_ = TrueDensityKind::Exp1Sine;
  BasisFamily family_ = BasisFamily::legendre();
  double c0_ = 1.0;
  std::function<double(double)> g0_;
  // Numeric CDF grid (empty when the kind has an exact CDF).
  std::shared_ptr<const std::vector<double>> grid_x_;
  std::shared_ptr<const std::vector<double>> grid_cdf_;
};

/// n i.i.d. draws from g0 w; deterministic in (spec, n, seed).
std::vector<double> draw(const TrueDensitySpec& spec, std::size_t n, std::uint64_t seed);

/// Kolmogorov-Smirnov distance between the sample's ECDF and spec.cdf().
double ks_statistic(const TrueDensitySpec& spec, std::span<const double> sample);

inline constexpr int kCdfGridPoints = 8192;
inline constexpr int kValidationGridPoints = 2048;

}  // namespace polysieve
