#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polysieve/basis.hpp"

namespace polysieve {

/// Finite truncation (eta_0, ..., eta_N) of an expansion in a BasisFamily.
class CoefficientVector {
 public:
  /// Throws InputError on non-finite entries, an empty vector, or a
  /// `normalized` flag that does not hold (|eta_0 gamma_0 - 1| > 1e-10).
  CoefficientVector(BasisFamily family, std::vector<double> values, bool normalized = false);

  BasisFamily family() const { return family_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  int truncation() const { return static_cast<int>(values_.size()) - 1; }
  double operator[](std::size_t j) const { return values_[j]; }
  bool normalized() const { return normalized_; }

  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  BasisFamily family_;
  std::vector<double> values_;
  bool normalized_ = false;
};

/// Converts generalized Legendre coefficients (L~_j = (L_j - L_{j-2})/sqrt(4j+6),
/// with L_{-1} = L_{-2} = 0) into standard Legendre coefficients.
CoefficientVector generalized_to_standard(std::span<const double> eta_tilde);

/// Flat text forms. CSV: "family,N,eta_0,...,eta_N" on one line.
std::string to_csv(const CoefficientVector& eta);
CoefficientVector coefficients_from_csv(const std::string& line);
std::string to_json(const CoefficientVector& eta);
CoefficientVector coefficients_from_json(const std::string& text);

}  // namespace polysieve
