#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "polysieve/inference.hpp"
#include "polysieve/sampling.hpp"

namespace polysieve {

enum class ExperimentId : std::uint8_t { Exp1, Exp2, SuppLaguerre, SuppHermite };
enum class Exp1Basis : std::uint8_t { Legendre, Trigonometric, Both };

ExperimentId parse_experiment_id(std::string_view id);
std::string_view to_string(ExperimentId id);
Exp1Basis parse_exp1_basis(std::string_view name);
std::string_view to_string(Exp1Basis basis);

inline const std::vector<double> kExp1Sigmas = {4.03, 5.12, 2.41, 1.68, 1.17,
                                                0.96, 0.64, 0.55, 0.28, 0.25};
inline const std::vector<double> kLaguerreSigmas = {1, 1, 0.25, 0.11, 0.06,
                                                    0.04, 0.03, 0.02, 0.02, 0.01};
/// 0.8 * (1, 0.53, 0.067, 0.012, 0.002, 0.001, 0, 0, 0, 0)
inline const std::vector<double> kHermiteSigmas = [] {
  std::vector<double> v = {1, 0.53, 0.067, 0.012, 0.002, 0.001, 0, 0, 0, 0};
  for (double& x : v) x *= 0.8;
  return v;
}();

struct ExperimentConfig {
  ExperimentId id = ExperimentId::Exp1;
  int p = 2;
  std::vector<int> n_values;
  int m = 1;
  /// Explicit prior standard deviations; empty means the theoretical prior.
  std::vector<double> sigmas;
  /// Highest coefficient index; empty means k_n_rule().
  std::optional<int> k;
  McmcConfig mcmc;
  int grid_points = 401;
  std::uint64_t seed = 1;
  Exp1Basis basis = Exp1Basis::Legendre;
  int threads = 1;
  bool paper_scale = false;

  /// Desk-scale defaults, or the full-scale settings when paper_scale is set.
  static ExperimentConfig defaults(ExperimentId id, bool paper_scale = false);
  void validate() const;
  nlohmann::json to_json() const;
};

/// One posterior fit within an experiment.
struct FitRecord {
  std::string label;  // basis or family name
  int n = 0;
  int n_index = 0;
  int replication = 0;
  int k = 0;  // highest coefficient index
  std::uint64_t data_seed = 0;
  std::uint64_t chain_seed = 0;
  double hellinger = 0;  // d_H, not squared
  double rate = 0;       // n^{-1/(2p+1)}
  double acceptance = 0;
  double final_scale = 0;
  double clamp_mass = 0;
  double discrepancy = 0;
  bool warning = false;
};

/// Posterior curve on a plotting grid, scaled by w(x) to a Lebesgue density.
struct CurveSet {
  std::string label;
  PosteriorCurve curve;
  std::vector<double> truth;
  double mass = 0;  // Simpson integral of the mean curve over the grid
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<FitRecord> fits;
  std::vector<CurveSet> curves;
  std::vector<int> k_values;     // one per n
  std::vector<double> medians;   // median d_H per n
  std::vector<double> rates;     // n^{-1/(2p+1)} per n

  nlohmann::json to_json() const;
  std::string distances_csv() const;
  std::string curves_csv() const;
  std::string plot_svg() const;
};

/// Replication seed: splitmix64 over (master, n index, replication, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n_index, std::uint64_t replication,
                          std::uint64_t stream);

ExperimentReport run_experiment1(const ExperimentConfig& cfg);
ExperimentReport run_experiment2(const ExperimentConfig& cfg);
ExperimentReport run_supplement(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Writes report.json, curves.csv, distances.csv and plot.svg; returns the paths.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir);

/// Simpson's rule on an equispaced grid (odd point count), trapezoid otherwise.
double grid_integral(std::span<const double> x, std::span<const double> y);

struct CheckReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
  nlohmann::json details;
};

/// |int q_i q_j w - delta_ij gamma_j| <= 1e-10 max(1, gamma_j) for i, j <= max_degree.
CheckReport orthogonality_check(int max_degree = 15);

/// Random finite sequences against the weighted Hardy bound with C_H = zeta(3/2)^2.
CheckReport hardy_check(int trials, int J, std::uint64_t seed);
inline constexpr double kZeta32 = 2.6123753486854883;
inline constexpr double kHardyConstant = kZeta32 * kZeta32;

/// LHS and RHS of the Hardy bound for one pair of sequences (a_1..a_J, b_0..b_{J-1}).
struct HardySums {
  double lhs;
  double rhs;
};
HardySums hardy_sums(std::span<const double> a, std::span<const double> b);

/// Growth ratio gamma~_j / j^{4p+1} (Legendre) or gamma~_j / (j^{4p} gamma_j)
/// (Hermite) over j in [5, 40], compared with the frozen regression bands.
CheckReport growth_check(BasisFamily family, int p);
double growth_ratio(BasisFamily family, int j, int p);

struct GrowthBand {
  double lo;
  double hi;
};
GrowthBand frozen_growth_band(BasisFamily family, int p);

/// Closed-form divergences of the Laguerre pair plus symmetry and range checks.
CheckReport divergence_check();

}  // namespace polysieve
