#include "polysieve/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"

namespace polysieve {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gaussian_log_density(double x, double sigma) {
  return -0.5 * (x / sigma) * (x / sigma) - std::log(sigma) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double type7_quantile(std::vector<double>& v, double q) {
  const double h = (double(v.size()) - 1.0) * q;
  const auto lo = std::size_t(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  std::nth_element(v.begin(), v.begin() + lo, v.end());
  const double a = v[lo];
  if (hi == lo) return a;
  const double b = *std::min_element(v.begin() + lo + 1, v.end());
  return a + (h - double(lo)) * (b - a);
}

// Basis table for a grid: row-major points x k.
std::vector<double> basis_table(BasisFamily family, int k, std::span<const double> grid) {
  std::vector<double> table(grid.size() * k);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    family.eval_all(grid[i], std::span<double>(table.data() + i * k, k));
  }
  return table;
}

// max(g/Z, 0) for every sample at one point, from that point's basis row.
void sample_values(const MarkovChain& chain, const double* q, int k, std::vector<double>& out) {
  const double g0 = chain.family.gamma(0);
  out.resize(chain.samples.size());
  for (std::size_t s = 0; s < chain.samples.size(); ++s) {
    const auto eta = chain.samples[s].values();
    double g = 0;
    for (int j = 0; j < k; ++j) g += eta[j] * q[j];
    out[s] = std::max(g / (eta[0] * g0), 0.0);
  }
}

double average_clamp_mass(const MarkovChain& chain) {
  const int k = int(chain.samples.front().size());
  const QuadratureRule& rule = cached_gauss_rule(chain.family.weight_tag(), kDivergenceOrder);
  const auto table = basis_table(chain.family, k, rule.nodes);
  const double g0 = chain.family.gamma(0);
  double total = 0;
  for (const auto& sample : chain.samples) {
    const auto eta = sample.values();
    const double z = eta[0] * g0;
    for (int m = 0; m < rule.order; ++m) {
      double g = 0;
      for (int j = 0; j < k; ++j) g += eta[j] * table[std::size_t(m) * k + j];
      total += rule.weights[m] * std::max(-g / z, 0.0);
    }
  }
  return total / double(chain.samples.size());
}

}  // namespace

std::vector<double> SievePriorSpec::mean() const {
  std::vector<double> m(sigmas.size(), 0.0);
  for (int j = 0; j < size(); ++j) {
    if (!free(j)) m[j] = pinned[j];
  }
  return m;
}

void SievePriorSpec::validate() const {
  if (sigmas.empty()) throw InputError("prior needs at least one coefficient");
  if (int(sigmas.size()) > kMaxDegree + 1) throw CapabilityError("prior exceeds the degree cap");
  if (pinned.size() != sigmas.size()) throw InputError("pinned values must match sigmas");
  for (double s : sigmas) {
    if (!(s >= 0) || !std::isfinite(s)) throw InputError("prior sigmas must be finite and >= 0");
  }
  if (!mixture_weights.empty()) {
    if (mixture_weights.size() != sigmas.size()) {
      throw InputError("mixture weights need one entry per truncation level");
    }
    double sum = 0;
    for (double w : mixture_weights) {
      if (!(w >= 0)) throw InputError("mixture weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InputError("mixture weights must sum to 1");
  }
}

SievePriorSpec theoretical_sigmas(BasisFamily family, int p, int k) {
  if (k < 2) throw InputError("theoretical prior needs k >= 2");
  if (p < 1) throw InputError("smoothness p must be >= 1");
  if (k > kMaxDegree + 1) throw CapabilityError("prior exceeds the degree cap");
  SievePriorSpec spec;
  spec.family = family;
  spec.source = PriorSource::Theoretical;
  spec.p = p;
  spec.sigmas.assign(k, 0.0);
  spec.pinned.assign(k, 0.0);
  spec.pinned[0] = 1.0 / family.gamma(0);
  for (int j = 1; j < k; ++j) {
    spec.sigmas[j] = std::exp(-p * std::log(double(j)) - 0.5 * family.log_gamma(j));
  }
  return spec;
}

SievePriorSpec explicit_prior(BasisFamily family, std::vector<double> sigmas, int p) {
  SievePriorSpec spec;
  spec.family = family;
  spec.source = PriorSource::Explicit;
  spec.p = p;
  spec.sigmas = std::move(sigmas);
  spec.pinned.assign(spec.sigmas.size(), 0.0);
  if (!spec.sigmas.empty() && spec.sigmas[0] == 0.0) spec.pinned[0] = 1.0 / family.gamma(0);
  spec.validate();
  return spec;
}

SievePriorSpec trig_comparison_prior(int p, int k) {
  if (k < 1) throw InputError("trigonometric prior needs k >= 1");
  std::vector<double> sigmas(2 * k + 1, 0.0);
  for (int j = 1; j <= 2 * k; ++j) {
    const double s = (j % 2 == 1) ? j + 1.0 : double(j);
    sigmas[j] = std::pow(s, -(2.0 * p + 1.0) / 2.0);
  }
  return explicit_prior(BasisFamily::trigonometric(), std::move(sigmas), p);
}

SievePriorSpec with_uniform_mixture(SievePriorSpec spec, int lo) {
  const int k = spec.size();
  if (lo < 0 || lo >= k) throw InputError("mixture lower level out of range");
  spec.mixture_weights.assign(k, 0.0);
  for (int i = lo; i < k; ++i) spec.mixture_weights[i] = 1.0 / (k - lo);
  // Exact unit sum regardless of rounding in 1/(k-lo).
  double rest = 1.0;
  for (int i = lo; i < k - 1; ++i) rest -= spec.mixture_weights[i];
  spec.mixture_weights[k - 1] = rest;
  spec.validate();
  return spec;
}

int k_n_rule(double n, int p, KnVariant variant, std::optional<int> override_value) {
  if (!(n >= 1)) throw InputError("sample size must be >= 1");
  if (p < 1) throw InputError("smoothness p must be >= 1");
  if (override_value) return std::max(*override_value, 2);
  const double e = (6.0 * p + 1.0) / (7.0 * p * (2.0 * p + 1.0));
  const double base = std::pow(n, e);
  if (variant == KnVariant::Exp2) {
    int k = int(std::lround(2.0 * base - 1.0));
    if (k % 2 != 0) ++k;
    return std::max(k, 2);
  }
  if (n == 10000.0) return 9;
  return std::max(int(std::lround(base - 1.0)), 2);
}

double log_prior(std::span<const double> eta, const SievePriorSpec& spec) {
  if (int(eta.size()) != spec.size()) {
    throw InputError("coefficient count does not match the prior");
  }
  const int k = spec.size();
  for (int j = 0; j < k; ++j) {
    if (!spec.free(j) && eta[j] != spec.pinned[j]) return kNegInf;
  }
  if (spec.mixture_weights.empty()) {
    double lp = 0;
    for (int j = 0; j < k; ++j) {
      if (spec.free(j)) lp += gaussian_log_density(eta[j], spec.sigmas[j]);
    }
    return lp;
  }
  // Level i keeps coordinates 0..i; it is excluded when anything above i is nonzero.
  int top = 0;
  for (int j = 0; j < k; ++j) {
    if (eta[j] != 0.0) top = j;
  }
  std::vector<double> terms;
  double partial = 0;
  for (int i = 0; i < k; ++i) {
    if (spec.free(i)) partial += gaussian_log_density(eta[i], spec.sigmas[i]);
    if (i >= top && spec.mixture_weights[i] > 0) {
      terms.push_back(std::log(spec.mixture_weights[i]) + partial);
    }
  }
  return log_sum_exp(terms);
}

double log_prior(const CoefficientVector& eta, const SievePriorSpec& spec) {
  if (eta.family() != spec.family) throw InputError("coefficient family does not match the prior");
  return log_prior(eta.values(), spec);
}

Likelihood::Likelihood(BasisFamily family, int size, std::span<const double> data)
    : family_(family), k_(size), n_(data.size()), gamma0_(family.gamma(0)) {
  if (data.empty()) throw InputError("likelihood needs at least one observation");
  if (size < 1) throw InputError("likelihood needs at least one coefficient");
  const Interval dom = family.domain();
  for (double y : data) {
    if (!dom.contains(y)) throw InputError("observation " + format_double(y) + " outside the domain");
  }
  design_ = basis_table(family, size, data);
}

double Likelihood::operator()(std::span<const double> eta) const {
  if (int(eta.size()) != k_) throw InputError("coefficient count does not match the likelihood");
  const double z = eta[0] * gamma0_;
  if (!(z > 0)) return kNegInf;
  double sum = 0;
  const double* row = design_.data();
  for (std::size_t i = 0; i < n_; ++i, row += k_) {
    double g = 0;
    for (int j = 0; j < k_; ++j) g += eta[j] * row[j];
    if (!(g > 0)) return kNegInf;
    sum += std::log(g);
  }
  return sum - double(n_) * std::log(z);
}

double log_likelihood(const CoefficientVector& eta, std::span<const double> data) {
  return Likelihood(eta.family(), int(eta.size()), data)(eta.values());
}

void McmcConfig::validate() const {
  if (iterations < 1) throw InputError("mcmc.iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw InputError("mcmc.burn_in must satisfy 0 <= burn_in < iterations");
  }
  if (!(proposal_scale > 0) || !std::isfinite(proposal_scale)) {
    throw InputError("mcmc.proposal_scale must be positive");
  }
}

MarkovChain rw_metropolis(const SievePriorSpec& spec, std::span<const double> data,
                          const McmcConfig& cfg) {
  spec.validate();
  cfg.validate();
  const int k = spec.size();
  std::optional<Likelihood> lik;
  if (cfg.likelihood == LikelihoodMode::Data) lik.emplace(spec.family, k, data);
  auto log_target = [&](std::span<const double> eta) {
    const double lp = log_prior(eta, spec);
    if (lp == kNegInf || !lik) return lp;
    return lp + (*lik)(eta);
  };

  std::vector<double> state = spec.mean();
  double lp = log_target(state);
  if (lp == kNegInf) {
    state.assign(k, 0.0);
    state[0] = 1.0 / spec.family.gamma(0);
    lp = log_target(state);
  }
  if (lp == kNegInf) throw NumericError("no admissible starting state for the chain");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  MarkovChain chain;
  chain.family = spec.family;
  chain.seed = cfg.seed;
  chain.burn_in = cfg.burn_in;
  chain.samples.reserve(cfg.iterations - cfg.burn_in);
  chain.log_posterior.reserve(cfg.iterations - cfg.burn_in);

  double scale = cfg.proposal_scale;
  std::vector<double> proposal(k);
  int window_accepted = 0;
  int consecutive_rejects = 0;
  long kept_accepted = 0;

  for (int it = 0; it < cfg.iterations; ++it) {
    for (int j = 0; j < k; ++j) {
      proposal[j] = spec.free(j) ? state[j] + scale * spec.sigmas[j] * normal(rng) : state[j];
    }
    const double u = unif(rng);
    const double lp_new = log_target(proposal);
    const bool accept = lp_new != kNegInf && std::log(u) < lp_new - lp;
    if (accept) {
      state.swap(proposal);
      lp = lp_new;
    }
    const bool burning = it < cfg.burn_in;
    if (burning) {
      window_accepted += accept;
      consecutive_rejects = accept ? 0 : consecutive_rejects + 1;
      if (consecutive_rejects >= kStuckLimit) {
        throw StuckChainError("chain rejected " + std::to_string(kStuckLimit) +
                              " consecutive proposals during burn-in; try a smaller proposal_scale");
      }
      if (cfg.adapt && (it + 1) % kAdaptWindow == 0) {
        const double acc = double(window_accepted) / kAdaptWindow;
        if (acc < 0.2) scale *= std::max(0.1, acc / 0.3);
        if (acc > 0.4) scale *= std::min(10.0, acc / 0.3);
        window_accepted = 0;
      }
    } else {
      kept_accepted += accept;
      chain.samples.emplace_back(spec.family, state);
      chain.log_posterior.push_back(lp);
    }
  }
  chain.acceptance_rate = double(kept_accepted) / double(cfg.iterations - cfg.burn_in);
  chain.final_scale = scale;
  return chain;
}

double normalized_clamped(const CoefficientVector& eta, double x) {
  const double z = eta[0] * eta.family().gamma(0);
  return std::max(evaluate(eta, x) / z, 0.0);
}

PosteriorCurve posterior_mean_density(const MarkovChain& chain, std::span<const double> grid) {
  if (chain.samples.empty()) throw InputError("posterior mean needs a nonempty chain");
  const int k = int(chain.samples.front().size());
  const auto table = basis_table(chain.family, k, grid);
  PosteriorCurve c;
  c.x.assign(grid.begin(), grid.end());
  c.mean.resize(grid.size());
  std::vector<double> vals;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sample_values(chain, table.data() + i * k, k, vals);
    double s = 0;
    for (double v : vals) s += v;
    c.mean[i] = s / double(vals.size());
  }
  c.lower = c.mean;
  c.upper = c.mean;
  c.clamp_mass = average_clamp_mass(chain);
  return c;
}

PosteriorCurve credible_bands(const MarkovChain& chain, std::span<const double> grid,
                              double level) {
  if (!(level >= 0 && level <= 1)) throw InputError("credible level must lie in [0, 1]");
  const std::size_t need =
      level < 1 ? std::size_t(std::ceil(2.0 / (1.0 - level) - 1e-9)) : std::size_t(1);
  if (chain.samples.size() < need) {
    throw InputError("credible band at level " + format_double(level) + " needs at least " +
                     std::to_string(need) + " samples");
  }
  PosteriorCurve c = posterior_mean_density(chain, grid);
  const int k = int(chain.samples.front().size());
  const auto table = basis_table(chain.family, k, grid);
  std::vector<double> vals;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sample_values(chain, table.data() + i * k, k, vals);
    c.lower[i] = type7_quantile(vals, (1.0 - level) / 2.0);
    c.upper[i] = type7_quantile(vals, (1.0 + level) / 2.0);
  }
  return c;
}

WeightedDensity posterior_mean_function(const MarkovChain& chain) {
  if (chain.samples.empty()) throw InputError("posterior mean needs a nonempty chain");
  auto shared = std::make_shared<const MarkovChain>(chain);
  const int k = int(chain.samples.front().size());
  auto fn = [shared, k](double x) {
    std::vector<double> q(k);
    shared->family.eval_all(x, q);
    std::vector<double> vals;
    sample_values(*shared, q.data(), k, vals);
    double s = 0;
    for (double v : vals) s += v;
    return s / double(vals.size());
  };
  return WeightedDensity::from_function(chain.family, std::move(fn), "posterior-mean");
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw InputError("linspace needs at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

std::string chain_to_csv(const MarkovChain& chain) {
  const std::size_t k = chain.samples.empty() ? 0 : chain.samples.front().size();
  std::string out = "iteration,log_posterior";
  for (std::size_t j = 0; j < k; ++j) out += ",eta_" + std::to_string(j);
  out += '\n';
  for (std::size_t s = 0; s < chain.samples.size(); ++s) {
    out += std::to_string(chain.burn_in + s) + ',' + format_double(chain.log_posterior[s]);
    for (double v : chain.samples[s].values()) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const PosteriorCurve& curve, std::span<const double> truth) {
  const bool with_truth = !truth.empty();
  if (with_truth && truth.size() != curve.x.size()) {
    throw InputError("truth column must match the curve grid");
  }
  std::string out = with_truth ? "x,mean,lower,upper,truth\n" : "x,mean,lower,upper\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    out += format_double(curve.x[i]) + ',' + format_double(curve.mean[i]) + ',' +
           format_double(curve.lower[i]) + ',' + format_double(curve.upper[i]);
    if (with_truth) out += ',' + format_double(truth[i]);
    out += '\n';
  }
  return out;
}

}  // namespace polysieve
