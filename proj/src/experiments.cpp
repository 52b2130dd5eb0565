#include "polysieve/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <thread>

#include "polysieve/divergence.hpp"
#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"
#include "polysieve/svg.hpp"

namespace polysieve {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Runs body(0..count-1) on up to `threads` workers; rethrows the lowest-index failure.
void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = std::max(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 0) return std::nan("");
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double rate_of(int n, int p) { return std::pow(double(n), -1.0 / (2.0 * p + 1.0)); }

Interval plot_window(BasisFamily family) {
  switch (family.weight_tag()) {
    case WeightTag::Gaussian: return {-2.5, 2.5};
    case WeightTag::Exponential: return {0.0, 6.0};
    default: return {-1.0, 1.0};
  }
}

struct FitOutput {
  FitRecord record;
  std::optional<CurveSet> curve;
};

// Fits one chain and measures it against the truth. `to_fit` maps an x on the
// plotting grid to the fitted family's coordinate and `jacobian` rescales its
// density back to x; both are the identity except for the trigonometric basis.
FitOutput fit_and_score(const SievePriorSpec& prior, std::span<const double> data,
                        const TrueDensitySpec& truth, McmcConfig mcmc, std::string label,
                        bool want_curve, int grid_points,
                        const std::function<double(double)>& to_fit = {}, double jacobian = 1.0) {
  const MarkovChain chain = rw_metropolis(prior, data, mcmc);
  const WeightedDensity estimate = posterior_mean_function(chain);
  const DivergenceReport div = divergences(estimate, truth.as_weighted());
  FitOutput out;
  out.record.label = std::move(label);
  out.record.k = prior.size() - 1;
  out.record.chain_seed = mcmc.seed;
  out.record.hellinger = std::sqrt(div.hellinger_sq);
  out.record.acceptance = chain.acceptance_rate;
  out.record.final_scale = chain.final_scale;
  out.record.discrepancy = div.discrepancy;
  out.record.warning = div.warning;
  if (want_curve) {
    const Interval win = plot_window(truth.family().is_polynomial() ? truth.family()
                                                                    : BasisFamily::legendre());
    const std::vector<double> xs = linspace(win.lo, win.hi, grid_points);
    std::vector<double> fit_grid = xs;
    if (to_fit) std::transform(xs.begin(), xs.end(), fit_grid.begin(), to_fit);
    CurveSet cs;
    cs.label = out.record.label;
    cs.curve = credible_bands(chain, fit_grid, 0.95);
    out.record.clamp_mass = cs.curve.clamp_mass;
    const WeightTag tag = chain.family.weight_tag();
    cs.truth.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double w = weight_value(tag, fit_grid[i]) * jacobian;
      cs.curve.mean[i] *= w;
      cs.curve.lower[i] *= w;
      cs.curve.upper[i] *= w;
      cs.truth[i] = truth.lebesgue_density(fit_grid[i]) * jacobian;
    }
    cs.curve.x = xs;
    cs.mass = grid_integral(cs.curve.x, cs.curve.mean);
    out.curve = std::move(cs);
  } else {
    out.record.clamp_mass = posterior_mean_density(chain, std::span<const double>()).clamp_mass;
  }
  return out;
}

SievePriorSpec prior_for(const ExperimentConfig& cfg, BasisFamily family, int k) {
  if (cfg.sigmas.empty()) return theoretical_sigmas(family, cfg.p, k + 1);
  if (int(cfg.sigmas.size()) < k + 1) {
    throw InputError("prior needs " + std::to_string(k + 1) + " sigmas, got " +
                     std::to_string(cfg.sigmas.size()));
  }
  return explicit_prior(family, {cfg.sigmas.begin(), cfg.sigmas.begin() + k + 1}, cfg.p);
}

void summarize(ExperimentReport& r) {
  const auto& cfg = r.config;
  r.medians.clear();
  r.rates.clear();
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    std::vector<double> d;
    for (const auto& f : r.fits) {
      if (f.n_index == int(ni)) d.push_back(f.hellinger);
    }
    r.medians.push_back(median(d));
    r.rates.push_back(rate_of(cfg.n_values[ni], cfg.p));
  }
}

nlohmann::json fit_json(const FitRecord& f) {
  return {{"label", f.label},
          {"n", f.n},
          {"replication", f.replication},
          {"k", f.k},
          {"data_seed", f.data_seed},
          {"chain_seed", f.chain_seed},
          {"hellinger", f.hellinger},
          {"rate", f.rate},
          {"acceptance", f.acceptance},
          {"final_scale", f.final_scale},
          {"clamp_mass", f.clamp_mass},
          {"discrepancy", f.discrepancy},
          {"warning", f.warning}};
}

}  // namespace

ExperimentId parse_experiment_id(std::string_view id) {
  if (id == "exp1") return ExperimentId::Exp1;
  if (id == "exp2") return ExperimentId::Exp2;
  if (id == "supp-laguerre") return ExperimentId::SuppLaguerre;
  if (id == "supp-hermite") return ExperimentId::SuppHermite;
  throw InputError("unknown experiment '" + std::string(id) + "'");
}

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::Exp1: return "exp1";
    case ExperimentId::Exp2: return "exp2";
    case ExperimentId::SuppLaguerre: return "supp-laguerre";
    case ExperimentId::SuppHermite: return "supp-hermite";
  }
  return "?";
}

Exp1Basis parse_exp1_basis(std::string_view name) {
  if (name == "legendre") return Exp1Basis::Legendre;
  if (name == "trig" || name == "trigonometric") return Exp1Basis::Trigonometric;
  if (name == "both") return Exp1Basis::Both;
  throw InputError("unknown basis '" + std::string(name) + "' (legendre, trig, both)");
}

std::string_view to_string(Exp1Basis basis) {
  switch (basis) {
    case Exp1Basis::Legendre: return "legendre";
    case Exp1Basis::Trigonometric: return "trig";
    case Exp1Basis::Both: return "both";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id, bool paper_scale) {
  ExperimentConfig c;
  c.id = id;
  c.paper_scale = paper_scale;
  c.p = 2;
  c.mcmc.iterations = 10000;
  c.mcmc.burn_in = 2000;
  switch (id) {
    case ExperimentId::Exp1:
      c.n_values = {paper_scale ? 10000 : 2000};
      c.sigmas = kExp1Sigmas;
      c.k = 9;
      break;
    case ExperimentId::Exp2:
      c.n_values = {100, 500, 1000, 1500, 2000};
      c.m = paper_scale ? 100 : 20;
      c.mcmc.iterations = 5000;
      c.mcmc.burn_in = 1000;
      break;
    case ExperimentId::SuppLaguerre:
      c.n_values = {10000};
      c.sigmas = kLaguerreSigmas;
      c.k = 9;
      break;
    case ExperimentId::SuppHermite:
      c.n_values = {10000};
      c.sigmas = kHermiteSigmas;
      c.k = 9;
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (p < 1) throw InputError("p must be >= 1");
  if (n_values.empty()) throw InputError("at least one n value is required");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw InputError("n values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) throw InputError("n values must be ascending");
  }
  if (m < 1) throw InputError("m must be >= 1");
  if (k && (*k < 1 || *k > kMaxDegree)) throw InputError("k must lie in [1, 200]");
  if (grid_points < 3) throw InputError("grid must have at least 3 points");
  if (threads < 1) throw InputError("threads must be >= 1");
  for (double s : sigmas) {
    if (!(s >= 0) || !std::isfinite(s)) throw InputError("sigmas must be finite and >= 0");
  }
  mcmc.validate();
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {{"experiment", to_string(id)},
                      {"p", p},
                      {"n", n_values},
                      {"m", m},
                      {"prior", sigmas.empty() ? "theoretical" : "explicit"},
                      {"sigmas", sigmas},
                      {"grid_points", grid_points},
                      {"seed", seed},
                      {"paper_scale", paper_scale},
                      {"mcmc",
                       {{"iterations", mcmc.iterations},
                        {"burn_in", mcmc.burn_in},
                        {"proposal_scale", mcmc.proposal_scale},
                        {"adapt", mcmc.adapt}}}};
  j["k"] = k ? nlohmann::json(*k) : nlohmann::json("rule");
  if (id == ExperimentId::Exp1) j["basis"] = to_string(basis);
  return j;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n_index, std::uint64_t replication,
                          std::uint64_t stream) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ n_index);
  h = splitmix64(h ^ replication);
  return splitmix64(h ^ stream);
}

ExperimentReport run_experiment1(const ExperimentConfig& cfg) {
  if (cfg.id != ExperimentId::Exp1) throw InputError("config is not an exp1 config");
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  const int n = cfg.n_values.front();
  const int k = cfg.k.value_or(k_n_rule(n, cfg.p, KnVariant::Exp1));
  report.k_values = {k};
  const auto truth = TrueDensitySpec::build(TrueDensityKind::Exp1Sine, BasisFamily::legendre());
  const std::uint64_t data_seed = derive_seed(cfg.seed, 0, 0, 0);
  const std::vector<double> y = draw(truth, n, data_seed);

  struct Job {
    Exp1Basis basis;
    std::uint64_t stream;
  };
  std::vector<Job> jobs;
  if (cfg.basis != Exp1Basis::Trigonometric) jobs.push_back({Exp1Basis::Legendre, 1});
  if (cfg.basis != Exp1Basis::Legendre) jobs.push_back({Exp1Basis::Trigonometric, 2});
  std::vector<FitOutput> outs(jobs.size());
  parallel_for(int(jobs.size()), cfg.threads, [&](int i) {
    McmcConfig mcmc = cfg.mcmc;
    mcmc.seed = derive_seed(cfg.seed, 0, 0, jobs[i].stream);
    if (jobs[i].basis == Exp1Basis::Legendre) {
      outs[i] = fit_and_score(prior_for(cfg, BasisFamily::legendre(), k), y, truth, mcmc,
                              "legendre", true, cfg.grid_points);
    } else {
      // The trigonometric basis lives on [0, 1]; u = (x + 1)/2.
      std::vector<double> u(y.size());
      std::transform(y.begin(), y.end(), u.begin(), [](double v) { return (v + 1.0) / 2.0; });
      const auto trig_truth =
          TrueDensitySpec::build(TrueDensityKind::Exp1Sine, BasisFamily::trigonometric());
      outs[i] = fit_and_score(trig_comparison_prior(cfg.p, 5), u, trig_truth, mcmc, "trig", true,
                              cfg.grid_points, [](double x) { return (x + 1.0) / 2.0; }, 0.5);
    }
  });
  for (auto& o : outs) {
    o.record.n = n;
    o.record.data_seed = data_seed;
    o.record.rate = rate_of(n, cfg.p);
    report.fits.push_back(o.record);
    report.curves.push_back(std::move(*o.curve));
  }
  summarize(report);
  return report;
}

ExperimentReport run_experiment2(const ExperimentConfig& cfg) {
  if (cfg.id != ExperimentId::Exp2) throw InputError("config is not an exp2 config");
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  for (int n : cfg.n_values) {
    report.k_values.push_back(cfg.k.value_or(k_n_rule(n, cfg.p, KnVariant::Exp2)));
  }
  const auto truth = TrueDensitySpec::build(TrueDensityKind::Exp1Sine, BasisFamily::legendre());
  const int nn = int(cfg.n_values.size());
  const int tasks = nn * cfg.m;
  std::vector<FitOutput> outs(tasks);
  parallel_for(tasks, cfg.threads, [&](int t) {
    const int ni = t / cfg.m;
    const int r = t % cfg.m;
    const int n = cfg.n_values[ni];
    const int k = report.k_values[ni];
    const std::uint64_t data_seed = derive_seed(cfg.seed, ni, r, 0);
    const std::vector<double> y = draw(truth, n, data_seed);
    McmcConfig mcmc = cfg.mcmc;
    mcmc.seed = derive_seed(cfg.seed, ni, r, 1);
    FitOutput o = fit_and_score(prior_for(cfg, BasisFamily::legendre(), k), y, truth, mcmc,
                                "legendre", r == 0, cfg.grid_points);
    o.record.n = n;
    o.record.n_index = ni;
    o.record.replication = r;
    o.record.data_seed = data_seed;
    o.record.rate = rate_of(n, cfg.p);
    if (o.curve) o.curve->label = "n=" + std::to_string(n);
    outs[t] = std::move(o);
  });
  for (auto& o : outs) {
    report.fits.push_back(o.record);
    if (o.curve) report.curves.push_back(std::move(*o.curve));
  }
  summarize(report);
  return report;
}

ExperimentReport run_supplement(const ExperimentConfig& cfg) {
  BasisFamily family = BasisFamily::laguerre();
  TrueDensityKind kind = TrueDensityKind::SuppExponential;
  if (cfg.id == ExperimentId::SuppHermite) {
    family = BasisFamily::hermite();
    kind = TrueDensityKind::SuppGaussian;
  } else if (cfg.id != ExperimentId::SuppLaguerre) {
    throw InputError("config is not a supplement config");
  }
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  const int n = cfg.n_values.front();
  const int k = cfg.k.value_or(int(cfg.sigmas.size()) - 1);
  report.k_values = {k};
  const auto truth = TrueDensitySpec::build(kind, family);
  const std::uint64_t data_seed = derive_seed(cfg.seed, 0, 0, 0);
  const std::vector<double> y = draw(truth, n, data_seed);
  McmcConfig mcmc = cfg.mcmc;
  mcmc.seed = derive_seed(cfg.seed, 0, 0, 1);
  FitOutput o = fit_and_score(prior_for(cfg, family, k), y, truth, mcmc, std::string(family.name()),
                              true, cfg.grid_points);
  o.record.n = n;
  o.record.data_seed = data_seed;
  o.record.rate = rate_of(n, cfg.p);
  report.fits.push_back(o.record);
  report.curves.push_back(std::move(*o.curve));
  summarize(report);
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.id) {
    case ExperimentId::Exp1: return run_experiment1(cfg);
    case ExperimentId::Exp2: return run_experiment2(cfg);
    default: return run_supplement(cfg);
  }
}

double grid_integral(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("grid_integral needs matching grids");
  const std::size_t n = x.size();
  if (n % 2 == 1 && n >= 3) {
    const double h = (x.back() - x.front()) / double(n - 1);
    double s = y.front() + y.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
    return s * h / 3.0;
  }
  double s = 0;
  for (std::size_t i = 1; i < n; ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["config"] = config.to_json();
  j["k_values"] = k_values;
  j["rates"] = rates;
  j["median_hellinger"] = medians;
  nlohmann::json fits_json = nlohmann::json::array();
  for (const auto& f : fits) fits_json.push_back(fit_json(f));
  j["fits"] = fits_json;
  nlohmann::json curves_json = nlohmann::json::array();
  for (const auto& c : curves) {
    curves_json.push_back({{"label", c.label}, {"mass", c.mass}, {"clamp_mass", c.curve.clamp_mass}});
  }
  j["curves"] = curves_json;
  j["rate_exponent"] = -1.0 / (2.0 * config.p + 1.0);
  if (config.id == ExperimentId::Exp2) {
    j["mcmc_note"] = "replication chains use the configured iterations and burn-in";
  }
  return j;
}

std::string ExperimentReport::distances_csv() const {
  std::string out =
      "label,n,replication,k,hellinger,rate,acceptance,final_scale,clamp_mass,data_seed,chain_seed\n";
  for (const auto& f : fits) {
    out += f.label + ',' + std::to_string(f.n) + ',' + std::to_string(f.replication) + ',' +
           std::to_string(f.k) + ',' + format_double(f.hellinger) + ',' + format_double(f.rate) +
           ',' + format_double(f.acceptance) + ',' + format_double(f.final_scale) + ',' +
           format_double(f.clamp_mass) + ',' + std::to_string(f.data_seed) + ',' +
           std::to_string(f.chain_seed) + '\n';
  }
  return out;
}

std::string ExperimentReport::curves_csv() const {
  std::string out = "label,x,mean,lower,upper,truth\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.curve.x.size(); ++i) {
      out += c.label + ',' + format_double(c.curve.x[i]) + ',' + format_double(c.curve.mean[i]) +
             ',' + format_double(c.curve.lower[i]) + ',' + format_double(c.curve.upper[i]) + ',' +
             format_double(c.truth[i]) + '\n';
    }
  }
  return out;
}

std::string ExperimentReport::plot_svg() const {
  static const char* palette[] = {"#1f4e9c", "#2a8c4a", "#8c2a8c", "#c07a00", "#555555"};
  svg::Plot plot;
  if (config.id == ExperimentId::Exp2) {
    plot.title = "Hellinger distance against sample size";
    plot.x_label = "n";
    plot.y_label = "d_H";
    svg::Points pts{"d_H per replication", {}, {}, "#1f4e9c"};
    for (const auto& f : fits) {
      pts.x.push_back(f.n);
      pts.y.push_back(f.hellinger);
    }
    plot.points.push_back(std::move(pts));
    svg::Line rate{"n^(-1/(2p+1))", {}, {}, "#c0392b", false};
    const int lo = config.n_values.front(), hi = config.n_values.back();
    for (int i = 0; i <= 100; ++i) {
      const double n = lo + (hi - lo) * i / 100.0;
      rate.x.push_back(n);
      rate.y.push_back(std::pow(n, -1.0 / (2.0 * config.p + 1.0)));
    }
    plot.lines.push_back(std::move(rate));
    svg::Line med{"median", {}, {}, "#333333", false};
    for (std::size_t i = 0; i < medians.size(); ++i) {
      med.x.push_back(config.n_values[i]);
      med.y.push_back(medians[i]);
    }
    plot.lines.push_back(std::move(med));
    return svg::render(plot);
  }
  plot.title = "Posterior mean density, " + std::string(to_string(config.id));
  plot.x_label = "x";
  plot.y_label = "density";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const std::string color = palette[i % 5];
    plot.bands.push_back({c.label + " 95% band", c.curve.x, c.curve.lower, c.curve.upper, color});
    plot.lines.push_back({c.label + " posterior mean", c.curve.x, c.curve.mean, color, false});
  }
  if (!curves.empty()) {
    plot.lines.push_back({"true density", curves.front().curve.x, curves.front().truth, "#c0392b", true});
  }
  return svg::render(plot);
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir) {
  const std::vector<std::filesystem::path> paths = {dir / "report.json", dir / "curves.csv",
                                                    dir / "distances.csv", dir / "plot.svg"};
  write_text_file(paths[0], report.to_json().dump(2) + "\n");
  write_text_file(paths[1], report.curves_csv());
  write_text_file(paths[2], report.distances_csv());
  write_text_file(paths[3], report.plot_svg());
  return paths;
}

CheckReport orthogonality_check(int max_degree) {
  CheckReport r;
  r.name = "orthogonality";
  const BasisFamily families[] = {BasisFamily::legendre(), BasisFamily::hermite(),
                                  BasisFamily::laguerre(), BasisFamily::trigonometric()};
  for (const BasisFamily f : families) {
    const QuadratureRule& rule = cached_gauss_rule(f.weight_tag(), kInnerProductOrder);
    double worst = 0;
    for (int i = 0; i <= max_degree; ++i) {
      for (int j = 0; j <= i; ++j) {
        long double s = 0;
        for (int m = 0; m < rule.order; ++m) {
          s += rule.weights_ext[m] * f.eval_extended(i, rule.nodes_ext[m]) *
               f.eval_extended(j, rule.nodes_ext[m]);
        }
        const double target = i == j ? f.gamma(j) : 0.0;
        const double err = std::abs(double(s) - target) / std::max(1.0, f.gamma(j));
        worst = std::max(worst, err);
        if (err > 1e-10) {
          r.passed = false;
          r.failures.push_back(std::string(f.name()) + " (" + std::to_string(i) + "," +
                               std::to_string(j) + "): scaled error " + format_double(err));
        }
      }
    }
    r.details[std::string(f.name())] = worst;
  }
  return r;
}

HardySums hardy_sums(std::span<const double> a, std::span<const double> b) {
  const std::size_t J = a.size();
  if (b.size() != J) throw InputError("hardy_sums expects a_1..a_J and b_0..b_{J-1}");
  // tail[i] = sum_{j>i} a_j, with a_j stored at a[j-1].
  std::vector<double> tail(J + 1, 0.0);
  for (std::size_t j = J; j >= 1; --j) tail[j - 1] = tail[j] + a[j - 1];
  double lhs = 0;
  for (std::size_t i = 0; i < J; ++i) lhs += std::pow(tail[i] * b[i], 3);
  double rhs = 0;
  double running_max = 0;
  for (std::size_t j = 1; j <= J; ++j) {
    running_max = std::max(running_max, b[j - 1]);
    rhs += std::pow(double(j), 4) * std::pow(a[j - 1], 3) * std::pow(running_max, 3);
  }
  return {lhs, kHardyConstant * rhs};
}

CheckReport hardy_check(int trials, int J, std::uint64_t seed) {
  if (J < 1) throw InputError("hardy_check needs J >= 1");
  if (trials < 0) throw InputError("hardy_check needs trials >= 0");
  CheckReport r;
  r.name = "hardy";
  double max_ratio = 0;
  int violations = 0;
  std::vector<double> a(J), b(J);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, 0, std::uint64_t(t), 3));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double alpha = 3.0 * u(rng);
    for (int j = 1; j <= J; ++j) {
      double v = u(rng);
      switch (t % 3) {
        case 1: v *= std::pow(double(j), -alpha); break;     // decaying
        case 2: v = u(rng) < 0.2 ? v : 0.0; break;           // sparse
        default: break;                                      // uniform
      }
      a[j - 1] = v;
    }
    for (int i = 0; i < J; ++i) b[i] = (t % 2) ? u(rng) : std::exp(-alpha * u(rng) * i / J);
    const HardySums s = hardy_sums(a, b);
    if (s.rhs > 0) max_ratio = std::max(max_ratio, s.lhs / s.rhs);
    if (s.lhs > s.rhs * (1 + 1e-12)) {
      ++violations;
      r.passed = false;
      if (r.failures.size() < 10) {
        r.failures.push_back("trial " + std::to_string(t) + ": lhs " + format_double(s.lhs) +
                             " > rhs " + format_double(s.rhs));
      }
    }
  }
  r.details = {{"trials", trials}, {"J", J},          {"seed", seed},
               {"violations", violations}, {"max_ratio", max_ratio}, {"constant", kHardyConstant}};
  return r;
}

double growth_ratio(BasisFamily family, int j, int p) {
  const double lg = log_gamma_tilde(family, j, p, GammaTildeMode::Lemma);
  if (family.kind() == FamilyKind::Hermite) {
    return std::exp(lg - 4.0 * p * std::log(double(j)) - family.log_gamma(j));
  }
  return std::exp(lg - (4.0 * p + 1.0) * std::log(double(j)));
}

GrowthBand frozen_growth_band(BasisFamily family, int p) {
  // Observed extremes over j in [5, 40] widened by 5%.
  if (family.kind() == FamilyKind::Legendre) {
    if (p == 1) return {0.0498590, 0.574560};
    if (p == 2) return {3.19823, 650.023};
  }
  if (family.kind() == FamilyKind::Hermite) {
    if (p == 1) return {0.190000, 1.68000};
    if (p == 2) return {0.0352207, 1.37626};
  }
  throw CapabilityError("no frozen growth band for this family and p");
}

CheckReport growth_check(BasisFamily family, int p) {
  CheckReport r;
  r.name = "growth";
  const GrowthBand band = frozen_growth_band(family, p);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int j = 5; j <= 40; ++j) {
    const double ratio = growth_ratio(family, j, p);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (!(ratio > 0) || !std::isfinite(ratio) || ratio < band.lo || ratio > band.hi) {
      r.passed = false;
      r.failures.push_back("j=" + std::to_string(j) + ": ratio " + format_double(ratio) +
                           " outside [" + format_double(band.lo) + ", " + format_double(band.hi) + "]");
    }
  }
  r.details = {{"family", family.name()}, {"p", p},           {"min_ratio", lo},
               {"max_ratio", hi},         {"band_lo", band.lo}, {"band_hi", band.hi}};
  return r;
}

CheckReport divergence_check() {
  CheckReport r;
  r.name = "divergence";
  const BasisFamily lag = BasisFamily::laguerre();
  const auto g1 = WeightedDensity::from_function(lag, [](double x) { return 2.0 * std::exp(-x); });
  const auto g2 = WeightedDensity::from_function(lag, [](double) { return 1.0; });
  const double h2 = hellinger_sq(g1, g2);
  const double d = kl(g1, g2);
  const double v = log_var(g1, g2);
  const double h2_ref = 2.0 - 4.0 * std::sqrt(2.0) / 3.0;
  const double kl_ref = std::log(2.0) - 0.5;
  auto expect = [&](const char* what, double got, double want) {
    r.details[what] = {{"value", got}, {"expected", want}};
    if (!(std::abs(got - want) <= 1e-7)) {
      r.passed = false;
      r.failures.push_back(std::string(what) + " = " + format_double(got) + ", expected " +
                           format_double(want));
    }
  };
  expect("hellinger_sq", h2, h2_ref);
  expect("kl", d, kl_ref);
  expect("log_var", v, 0.25);
  expect("hellinger_sq_symmetry", hellinger_sq(g2, g1), h2);
  expect("self_distance", hellinger_sq(g1, g1), 0.0);
  return r;
}

}  // namespace polysieve
