#include "polysieve/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polysieve/config.hpp"
#include "polysieve/divergence.hpp"
#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"
#include "polysieve/svg.hpp"

#ifndef POLYSIEVE_VERSION
#define POLYSIEVE_VERSION "0.0.0"
#endif

namespace polysieve::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& dir, const std::string& command, const std::string& config_path,
                    const KeyValues& resolved, std::uint64_t seed, std::vector<fs::path> outputs) {
  const fs::path resolved_path = dir / "config.resolved";
  write_text_file(resolved_path, resolved.dump());
  outputs.push_back(resolved_path);
  nlohmann::json j;
  j["command"] = command;
  j["config_path"] = config_path;
  nlohmann::json echo = nlohmann::json::object();
  for (const auto& [k, v] : resolved.entries()) echo[k] = v;
  j["resolved_config"] = echo;
  j["tool_version"] = POLYSIEVE_VERSION;
  j["timestamp"] = utc_timestamp();
  j["seed"] = seed;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  const fs::path manifest = dir / "manifest.json";
  outs.push_back(manifest.string());
  j["outputs"] = outs;
  write_text_file(manifest, j.dump(2) + "\n");
}

struct FitFlags {
  std::string config;
  std::string out = "polysieve-fit";
  std::optional<std::uint64_t> seed;
};

int cmd_fit(const FitFlags& flags, std::ostream& out) {
  KeyValues kv = KeyValues::load(flags.config);
  if (flags.seed) kv.set("seed", std::to_string(*flags.seed));
  const FitConfig cfg = resolve_fit_config(kv);
  const int k = cfg.resolved_k();
  const bool trig = cfg.family.kind() == FamilyKind::Trigonometric;

  // Trigonometric fits take data on [-1, 1] and work on u = (x + 1)/2.
  std::optional<TrueDensitySpec> truth;
  std::vector<double> data;
  if (cfg.data) {
    data = read_observations_csv(*cfg.data);
    if (data.empty()) throw InputError("data file has no observations");
  } else {
    const BasisFamily draw_family = trig ? BasisFamily::legendre() : cfg.family;
    const auto source = TrueDensitySpec::build(cfg.true_density, draw_family);
    data = draw(source, std::size_t(cfg.n), derive_seed(cfg.seed, 0, 0, 0));
    truth = TrueDensitySpec::build(cfg.true_density, cfg.family);
  }
  if (trig) {
    for (double& y : data) y = (y + 1.0) / 2.0;
  }

  const SievePriorSpec prior =
      cfg.sigmas.empty() ? theoretical_sigmas(cfg.family, cfg.p, k + 1)
                         : explicit_prior(cfg.family, {cfg.sigmas.begin(), cfg.sigmas.begin() + k + 1},
                                          cfg.p);
  McmcConfig mcmc = cfg.mcmc;
  mcmc.seed = derive_seed(cfg.seed, 0, 0, 1);
  const MarkovChain chain = rw_metropolis(prior, data, mcmc);

  Interval win = cfg.family.domain();
  if (!win.bounded()) win = cfg.family.weight_tag() == WeightTag::Gaussian ? Interval{-2.5, 2.5}
                                                                           : Interval{0.0, 6.0};
  const std::vector<double> grid = linspace(win.lo, win.hi, cfg.grid_points);
  PosteriorCurve curve = credible_bands(chain, grid, cfg.level);
  std::vector<double> truth_curve;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = cfg.family.weight(grid[i]);
    curve.mean[i] *= w;
    curve.lower[i] *= w;
    curve.upper[i] *= w;
    if (truth) truth_curve.push_back(truth->lebesgue_density(grid[i]));
  }

  nlohmann::json report;
  report["family"] = cfg.family.name();
  report["n"] = data.size();
  report["k"] = k;
  report["prior"] = cfg.sigmas.empty() ? "theoretical" : "explicit";
  report["sigmas"] = prior.sigmas;
  report["acceptance_rate"] = chain.acceptance_rate;
  report["final_proposal_scale"] = chain.final_scale;
  report["chain_seed"] = mcmc.seed;
  report["samples"] = chain.samples.size();
  report["clamp_mass"] = curve.clamp_mass;
  report["curve_mass"] = grid_integral(grid, curve.mean);
  report["level"] = cfg.level;
  if (truth) {
    const auto div = divergences(posterior_mean_function(chain), truth->as_weighted());
    report["true_density"] = to_string(cfg.true_density);
    report["hellinger"] = std::sqrt(div.hellinger_sq);
    report["hellinger_discrepancy"] = div.discrepancy;
  }

  svg::Plot plot;
  plot.title = "Posterior mean density (" + std::string(cfg.family.name()) + ")";
  plot.x_label = trig ? "u = (x + 1)/2" : "x";
  plot.y_label = "density";
  plot.bands.push_back({"credible band", grid, curve.lower, curve.upper, "#1f4e9c"});
  plot.lines.push_back({"posterior mean", grid, curve.mean, "#1f4e9c", false});
  if (truth) plot.lines.push_back({"true density", grid, truth_curve, "#c0392b", true});

  const fs::path dir = flags.out;
  const std::vector<fs::path> outputs = {dir / "chain.csv", dir / "curves.csv", dir / "report.json",
                                         dir / "plot.svg"};
  write_text_file(outputs[0], chain_to_csv(chain));
  write_text_file(outputs[1], curve_to_csv(curve, truth_curve));
  write_text_file(outputs[2], report.dump(2) + "\n");
  write_text_file(outputs[3], svg::render(plot));
  write_manifest(dir, "fit", flags.config, cfg.to_key_values(), cfg.seed, outputs);
  out << "fit: acceptance " << format_double(chain.acceptance_rate);
  if (truth) out << ", d_H " << format_double(report["hellinger"].get<double>());
  out << "\nwrote " << dir.string() << "\n";
  return kOk;
}

struct ExperimentFlags {
  std::string id;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool paper_scale = false;
  std::optional<int> m, k, iterations, burn_in;
  std::vector<int> n;
  std::optional<double> proposal_scale;
  std::string basis;
};

int cmd_experiment(const ExperimentFlags& f, std::ostream& out) {
  const ExperimentId id = parse_experiment_id(f.id);
  KeyValues kv = f.config.empty() ? KeyValues() : KeyValues::load(f.config);
  if (f.paper_scale) kv.set("paper_scale", "true");
  if (f.seed) kv.set("seed", std::to_string(*f.seed));
  if (f.m) kv.set("m", std::to_string(*f.m));
  if (f.k) kv.set("k", std::to_string(*f.k));
  if (f.iterations) kv.set("mcmc.iterations", std::to_string(*f.iterations));
  if (f.burn_in) kv.set("mcmc.burn_in", std::to_string(*f.burn_in));
  if (f.proposal_scale) kv.set("mcmc.proposal_scale", format_double(*f.proposal_scale));
  if (!f.basis.empty()) kv.set("basis", f.basis);
  if (!f.n.empty()) {
    std::string s;
    for (std::size_t i = 0; i < f.n.size(); ++i) s += (i ? "," : "") + std::to_string(f.n[i]);
    kv.set("n", s);
  }
  if (f.threads > 0 || !kv.has("threads")) kv.set("threads", std::to_string(resolve_threads(f.threads)));
  const ExperimentConfig cfg = resolve_experiment_config(id, kv);
  const ExperimentReport report = run_experiment(cfg);
  const fs::path dir = f.out.empty() ? fs::path("polysieve-" + f.id) : fs::path(f.out);
  const auto outputs = write_report(report, dir);
  write_manifest(dir, "experiment " + f.id, f.config, experiment_to_key_values(cfg), cfg.seed, outputs);
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    out << "n=" << cfg.n_values[i] << " k=" << report.k_values[i]
        << " median d_H=" << format_double(report.medians[i])
        << " rate=" << format_double(report.rates[i]) << "\n";
  }
  out << "wrote " << dir.string() << "\n";
  return kOk;
}

struct CheckFlags {
  std::string suite;
  int trials = 1000;
  int J = 50;
  std::uint64_t seed = 1;
  std::string family = "all";
  std::vector<int> p;
  std::string out;
};

int cmd_check(const CheckFlags& f, std::ostream& out) {
  std::vector<CheckReport> reports;
  if (f.suite == "orthogonality") {
    reports.push_back(orthogonality_check());
  } else if (f.suite == "hardy") {
    reports.push_back(hardy_check(f.trials, f.J, f.seed));
  } else if (f.suite == "growth") {
    std::vector<BasisFamily> families;
    if (f.family == "all") {
      families = {BasisFamily::legendre(), BasisFamily::hermite()};
    } else {
      families = {BasisFamily::parse(f.family)};
    }
    const std::vector<int> ps = f.p.empty() ? std::vector<int>{1, 2} : f.p;
    for (BasisFamily fam : families) {
      for (int p : ps) reports.push_back(growth_check(fam, p));
    }
  } else if (f.suite == "divergence") {
    reports.push_back(divergence_check());
  } else {
    throw InputError("unknown check suite '" + f.suite + "'");
  }
  bool ok = true;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : reports) {
    ok = ok && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " " << r.details.dump() << "\n";
    for (const auto& msg : r.failures) out << "  " << msg << "\n";
    all.push_back({{"name", r.name}, {"passed", r.passed}, {"details", r.details}, {"failures", r.failures}});
  }
  if (!f.out.empty()) write_text_file(fs::path(f.out) / "check.json", all.dump(2) + "\n");
  return ok ? kOk : kCheckFailed;
}

struct SampleFlags {
  std::string family = "legendre";
  std::string true_density;
  int n = 1000;
  std::uint64_t seed = 1;
  std::string out = "observations.csv";
};

int cmd_sample(const SampleFlags& f, std::ostream& out) {
  const BasisFamily family = BasisFamily::parse(f.family);
  TrueDensityKind kind = TrueDensityKind::Exp1Sine;
  if (!f.true_density.empty()) {
    kind = parse_true_density_kind(f.true_density);
  } else if (family.weight_tag() == WeightTag::Exponential) {
    kind = TrueDensityKind::SuppExponential;
  } else if (family.weight_tag() == WeightTag::Gaussian) {
    kind = TrueDensityKind::SuppGaussian;
  }
  if (f.n < 1) throw InputError("--n must be >= 1");
  const auto spec = TrueDensitySpec::build(kind, family);
  const auto data = draw(spec, std::size_t(f.n), derive_seed(f.seed, 0, 0, 0));
  write_observations_csv(f.out, data);
  out << "wrote " << data.size() << " observations to " << f.out << "\n";
  return kOk;
}

}  // namespace

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("POLYSIEVE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian density estimation with orthogonal polynomial sieve priors", "polysieve"};
  app.set_version_flag("--version", POLYSIEVE_VERSION);
  app.require_subcommand(1);

  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Fit one posterior from a config file");
  fit->add_option("--config", fit_flags.config, "key = value config file")->required();
  fit->add_option("--out", fit_flags.out, "Output directory");
  fit->add_option("--seed", fit_flags.seed, "Master seed (overrides the config)");

  ExperimentFlags ex;
  auto* exp = app.add_subcommand("experiment", "Run exp1, exp2, supp-laguerre or supp-hermite");
  exp->add_option("id", ex.id, "Experiment id")->required();
  exp->add_option("--config", ex.config, "key = value overrides file");
  exp->add_option("--out", ex.out, "Output directory");
  exp->add_option("--seed", ex.seed, "Master seed");
  exp->add_option("--threads", ex.threads, "Worker threads (POLYSIEVE_THREADS fallback)");
  exp->add_flag("--paper-scale", ex.paper_scale, "Use the full-scale sample sizes and replication count");
  exp->add_option("--m", ex.m, "Replications per n");
  exp->add_option("--n", ex.n, "Sample sizes")->delimiter(',');
  exp->add_option("--k", ex.k, "Highest coefficient index");
  exp->add_option("--iterations", ex.iterations, "MCMC iterations");
  exp->add_option("--burn-in", ex.burn_in, "MCMC burn-in");
  exp->add_option("--proposal-scale", ex.proposal_scale, "Initial proposal scale");
  exp->add_option("--basis", ex.basis, "exp1 basis: legendre, trig or both");

  CheckFlags ck;
  auto* check = app.add_subcommand("check", "Run a numerical property suite");
  check->add_option("suite", ck.suite, "orthogonality, hardy, growth or divergence")->required();
  check->add_option("--trials", ck.trials, "Hardy trials");
  check->add_option("--J", ck.J, "Hardy truncation");
  check->add_option("--seed", ck.seed, "Hardy seed");
  check->add_option("--family", ck.family, "Growth family: legendre, hermite or all");
  check->add_option("--p", ck.p, "Growth smoothness values")->delimiter(',');
  check->add_option("--out", ck.out, "Directory for check.json");

  SampleFlags sf;
  auto* sample = app.add_subcommand("sample", "Draw observations from a true density");
  sample->add_option("--family", sf.family, "Basis family whose weight the density uses");
  sample->add_option("--true-density", sf.true_density,
                     "exp1-sine, supp-exponential or supp-gaussian");
  sample->add_option("--n", sf.n, "Number of observations");
  sample->add_option("--seed", sf.seed, "Master seed");
  sample->add_option("--out", sf.out, "Output CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_flags, out);
    if (exp->parsed()) return cmd_experiment(ex, out);
    if (check->parsed()) return cmd_check(ck, out);
    if (sample->parsed()) return cmd_sample(sf, out);
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace polysieve::cli
