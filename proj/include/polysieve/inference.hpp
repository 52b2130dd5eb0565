#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polysieve/density.hpp"

namespace polysieve {

enum class PriorSource : std::uint8_t { Theoretical, Explicit };

/// Product of independent Gaussians N(0, sigma_j^2) over coefficients 0..k-1,
/// optionally mixed over truncation levels.
///
/// A zero sigma pins its coordinate at pinned[j]; eta_0 is pinned at 1/gamma_0,
/// every other pinned coordinate at 0. mixture_weights[i], when present, is the
/// prior mass of the level that keeps coefficients 0..i and zeroes the rest.
struct SievePriorSpec {
  BasisFamily family = BasisFamily::legendre();
  std::vector<double> sigmas;
  std::vector<double> pinned;
  std::vector<double> mixture_weights;
  PriorSource source = PriorSource::Explicit;
  int p = 2;

  int size() const { return int(sigmas.size()); }
  bool free(int j) const { return sigmas[j] > 0; }
  /// Pinned values for sigma = 0, zero elsewhere.
  std::vector<double> mean() const;
  void validate() const;
};

/// sigma_0 = 0 (eta_0 pinned at 1/gamma_0), sigma_j = j^{-p} gamma_j^{-1/2} for 1 <= j < k.
SievePriorSpec theoretical_sigmas(BasisFamily family, int p, int k);

/// User-supplied standard deviations; zeros pin coordinates.
SievePriorSpec explicit_prior(BasisFamily family, std::vector<double> sigmas, int p = 2);

/// Trigonometric comparison prior over indices 0..2k: eta_0 pinned at 1 and
/// eta_j ~ N(0, s_j^{-(2p+1)}) with s_j = j + 1 for odd j and s_j = j for even j.
SievePriorSpec trig_comparison_prior(int p, int k = 5);

/// Uniform mixture weights over truncation levels lo..k-1.
SievePriorSpec with_uniform_mixture(SievePriorSpec spec, int lo = 2);

enum class KnVariant : std::uint8_t { Exp1, Exp2 };

/// Highest active coefficient index for sample size n.
///
/// Exp2: round(2 n^e - 1) with e = (6p+1)/(7p(2p+1)), bumped to the next even
/// integer when odd. Exp1: round(n^e - 1) unless the override table lists n
/// (10000 -> 9). An explicit override always wins. Both clamp to >= 2.
int k_n_rule(double n, int p, KnVariant variant, std::optional<int> override_value = {});

/// Sum of free-coordinate Gaussian log densities; -inf when a pinned coordinate
/// deviates. Mixtures combine levels by log-sum-exp.
double log_prior(std::span<const double> eta, const SievePriorSpec& spec);
double log_prior(const CoefficientVector& eta, const SievePriorSpec& spec);

/// sum_i log(g(Y_i | eta) / Z) with Z = eta_0 gamma_0, or -inf when Z <= 0 or
/// some g(Y_i) <= 0. The basis values at the data are tabulated once.
class Likelihood {
 public:
  Likelihood(BasisFamily family, int size, std::span<const double> data);

  double operator()(std::span<const double> eta) const;
  std::size_t data_size() const { return n_; }
  int size() const { return k_; }

 private:
  BasisFamily family_;
  int k_;
  std::size_t n_;
  double gamma0_;
  std::vector<double> design_;  // row-major n x k
};

double log_likelihood(const CoefficientVector& eta, std::span<const double> data);

enum class LikelihoodMode : std::uint8_t {
  Data,
  Flat,  // constant likelihood: the chain targets the prior
};

struct McmcConfig {
  int iterations = 10000;
  int burn_in = 2000;
  double proposal_scale = 0.3;
  bool adapt = true;
  std::uint64_t seed = 1;
  LikelihoodMode likelihood = LikelihoodMode::Data;

  void validate() const;
};

inline constexpr int kAdaptWindow = 200;
inline constexpr int kStuckLimit = 1000;

struct MarkovChain {
  BasisFamily family = BasisFamily::legendre();
  std::vector<CoefficientVector> samples;  // post burn-in, in order
  std::vector<double> log_posterior;       // aligned with samples
  double acceptance_rate = 0;              // post burn-in accepted / proposed
  std::uint64_t seed = 0;
  int burn_in = 0;
  double final_scale = 0;
};

/// Random-walk Metropolis with joint proposal eta'_j = eta_j + scale sigma_j xi_j
/// on the free coordinates. During burn-in the scale is multiplied every 200
/// steps towards acceptance in [0.2, 0.4]; it is frozen afterwards.
MarkovChain rw_metropolis(const SievePriorSpec& spec, std::span<const double> data,
                          const McmcConfig& cfg);

/// Pointwise statistics of the normalized, clamped densities max(g/Z, 0).
struct PosteriorCurve {
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double clamp_mass = 0;  // average over samples of int max(-g/Z, 0) w dx
};

PosteriorCurve posterior_mean_density(const MarkovChain& chain, std::span<const double> grid);

/// Pointwise type-7 quantiles at (1 - level)/2 and (1 + level)/2. Needs at least
/// ceil(2 / (1 - level)) samples (40 for a 95% band).
PosteriorCurve credible_bands(const MarkovChain& chain, std::span<const double> grid,
                              double level = 0.95);

/// Posterior mean as a density over the chain's family, evaluated lazily.
WeightedDensity posterior_mean_function(const MarkovChain& chain);

/// Normalized, clamped density of one state.
double normalized_clamped(const CoefficientVector& eta, double x);

/// Equispaced grid over a bounded interval, endpoints included.
std::vector<double> linspace(double lo, double hi, int points);

/// "iteration,log_posterior,eta_0,...,eta_{k-1}"
std::string chain_to_csv(const MarkovChain& chain);
/// "x,mean,lower,upper", plus a "truth" column when supplied.
std::string curve_to_csv(const PosteriorCurve& curve, std::span<const double> truth = {});

}  // namespace polysieve
