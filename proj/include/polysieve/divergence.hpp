#pragma once

#include <string>

#include "polysieve/density.hpp"

namespace polysieve {

struct DivergenceOptions {
  int order = kDivergenceOrder;
  // Recompute Hellinger on the dense grid and report the disagreement.
  bool cross_check = true;
  int grid_points = 4097;
};

struct DivergenceReport {
  double hellinger_sq = 0;
  double kl = 0;
  bool kl_infinite = false;
  double log_var = 0;
  int order = 0;
  double discrepancy = 0;  // |Gauss - dense grid| for hellinger_sq
  double clamp_mass = 0;   // int max(-g, 0) w dx summed over both arguments
  bool warning = false;    // discrepancy > 1e-6 or clamp mass > 1e-6
};

/// int (sqrt(g1) - sqrt(g2))^2 w dx with evaluations clamped at 0.
double hellinger_sq(const WeightedDensity& g1, const WeightedDensity& g2,
                    int order = kDivergenceOrder);

/// int g1 log(g1/g2) w dx; +inf when some node has g1 > 1e-12 and g2 <= 1e-300.
double kl(const WeightedDensity& g1, const WeightedDensity& g2, int order = kDivergenceOrder);

/// Var_{g1}(log g1 - log g2); +inf under the same absolute-continuity failure as kl.
double log_var(const WeightedDensity& g1, const WeightedDensity& g2,
               int order = kDivergenceOrder);

DivergenceReport divergences(const WeightedDensity& g1, const WeightedDensity& g2,
                             const DivergenceOptions& options = {});

/// "h2,kl,logvar,order,discrepancy"
std::string to_csv_row(const DivergenceReport& report);
inline constexpr const char* kDivergenceCsvHeader = "h2,kl,logvar,order,discrepancy";

}  // namespace polysieve
