// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "polysieve/basis.hpp"
#include "polysieve/cli.hpp"
#include "polysieve/density.hpp"
#include "polysieve/divergence.hpp"
#include "polysieve/errors.hpp"
#include "polysieve/experiments.hpp"
#include "polysieve/io.hpp"

using namespace polysieve;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s %2d %-28s %7.2fs (budget %gs) %s%s\n", ok ? "PASS" : "FAIL", id, name, secs, budget_s,
              o.detail.c_str(), in_time ? "" : " [over budget]");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome derivative_suite() {
  const BasisFamily herm = BasisFamily::hermite(), leg = BasisFamily::legendre();
  for (int j = 1; j <= 10; ++j) {
    for (int l = 1; l <= std::min(j, 3); ++l) {
      double expect = std::pow(2.0, l);
      for (int t = 0; t < l; ++t) expect *= (j - t);
      if (derivative_coeffs(herm, j, l)[j - l] != expect) return {false, "hermite closed form mismatch"};
    }
  }
  double worst = 0;
  for (int j = 1; j <= 12; ++j) {
    for (int l = 1; l <= std::min(j, 3); ++l) {
      const auto a = derivative_coeffs(leg, j, l);
      for (int g = 0; g < 50; ++g) {
        const double x = -0.98 + 1.96 * g / 49.0;
        double rec = 0;
        for (int i = 0; i < j; ++i) rec += a[i] * leg.eval(i, x);
        worst = std::max(worst, std::abs(rec - leg.derivative(j, l, x)));
      }
    }
  }
  return {worst <= 1e-9, fmt("legendre max reconstruction error %.2e <= 1e-9", worst)};
}

Outcome divergence_suite() {
  const BasisFamily lag = BasisFamily::laguerre();
  const auto g1 = WeightedDensity::from_function(lag, [](double x) { return 2 * std::exp(-x); });
  const auto g2 = WeightedDensity::from_function(lag, [](double) { return 1.0; });
  const double eh = std::abs(hellinger_sq(g1, g2) - (2 - 4 * std::sqrt(2.0) / 3));
  const double ek = std::abs(kl(g1, g2) - (std::log(2.0) - 0.5));
  const double ev = std::abs(log_var(g1, g2) - 0.25);
  const double worst = std::max({eh, ek, ev});
  return {worst <= 1e-7, fmt("max |error| %.2e <= 1e-7", worst)};
}

Outcome shift_suite() {
  const BasisFamily leg = BasisFamily::legendre();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double norm_err = 0, commute_err = 0, worst_ratio = 0;
  for (int t = 0; t < 50; ++t) {
    const double b = u(rng), c = u(rng);
    const auto raw = [b, c](double x) { return std::exp(b * x + c * x * x); };
    const double z = oracle::simpson(raw, -1, 1, 4000);
    const auto g = WeightedDensity::from_function(leg, [raw, z](double x) { return raw(x) / z; });
    const auto theta = normalize(project(g, leg, 10)).eta;
    for (double a : {1e-3, 1e-2, 1e-1}) {
      const ShiftParams s{a, 2.0};
      const auto shifted = shift_coefficients(theta, s);
      norm_err = std::max(norm_err, std::abs(shifted[0] * 2.0 - 1.0));
      const auto lhs = project(shift_density(g, s), leg, 10);
      for (int j = 0; j <= 10; ++j) commute_err = std::max(commute_err, std::abs(lhs[j] - shifted[j]));
      worst_ratio = std::max(worst_ratio, hellinger_sq(g, shift_density(g, s)) / (2 * 2.0 * a));
    }
  }
  const double msl = std::abs(max_shift_level(2, 0.5, 2) - 1.0 / 34);
  const bool ok = norm_err <= 1e-12 && commute_err <= 1e-9 && worst_ratio <= 1.0 && msl <= 1e-15;
  std::ostringstream d;
  d << "norm " << norm_err << " <= 1e-12, commute " << commute_err << " <= 1e-9, max d_H^2/(2 gamma_0 a) "
    << worst_ratio << " <= 1, |a_max - 1/34| " << msl << " <= 1e-15";
  return {ok, d.str()};
}

Outcome prior_recovery() {
  const auto spec = explicit_prior(BasisFamily::legendre(), kExp1Sigmas);
  McmcConfig cfg;
  cfg.iterations = 52000;
  cfg.burn_in = 2000;
  cfg.likelihood = LikelihoodMode::Flat;
  cfg.seed = 1;
  const auto chain = rw_metropolis(spec, {}, cfg);
  double worst = 0;
  for (int j = 0; j < spec.size(); ++j) {
    double m = 0, v = 0;
    for (const auto& s : chain.samples) m += s[j];
    m /= double(chain.samples.size());
    for (const auto& s : chain.samples) v += (s[j] - m) * (s[j] - m);
    const double sd = std::sqrt(v / double(chain.samples.size() - 1));
    worst = std::max(worst, std::abs(sd / spec.sigmas[j] - 1));
  }
  return {worst <= 0.10, fmt("max relative sd error %.4f <= 0.10 (50000 retained steps)", worst)};
}

Outcome experiment2() {
  auto cfg = ExperimentConfig::defaults(ExperimentId::Exp2);
  cfg.n_values = {100, 500, 1000, 2000};
  cfg.m = 20;
  cfg.mcmc.iterations = 5000;
  cfg.mcmc.burn_in = 1000;
  cfg.threads = workers();
  const auto r = run_experiment2(cfg);
  bool ok = true;
  int inversions = 0;
  std::ostringstream d;
  d << "medians";
  for (std::size_t i = 0; i < r.medians.size(); ++i) {
    d << ' ' << fmt("%.4f", r.medians[i]) << "/" << fmt("%.4f", 1.5 * r.rates[i]);
    if (r.medians[i] > 1.5 * r.rates[i]) ok = false;
    if (i > 0 && r.medians[i] > r.medians[i - 1]) {
      ++inversions;
      if (r.medians[i] > 1.10 * r.medians[i - 1]) ok = false;
    }
  }
  if (inversions > 1) ok = false;
  d << " (median/1.5 n^-1/5), inversions " << inversions << " <= 1 at <= 10%";
  return {ok, d.str()};
}

Outcome experiment1() {
  auto cfg = ExperimentConfig::defaults(ExperimentId::Exp1);
  const auto r = run_experiment1(cfg);
  const auto& fit = r.fits.at(0);
  const auto& cs = r.curves.at(0);
  bool ordered = true;
  int bad = 0;
  for (std::size_t i = 0; i < cs.curve.x.size(); ++i) {
    if (!(cs.curve.lower[i] <= cs.curve.mean[i] && cs.curve.mean[i] <= cs.curve.upper[i])) {
      ordered = false;
      ++bad;
    }
  }
  const bool ok = fit.hellinger <= 0.25 && std::abs(cs.mass - 1) <= 1e-3 && ordered;
  std::ostringstream d;
  d << "d_H " << fmt("%.4f", fit.hellinger) << " <= 0.25, mass " << fmt("%.6f", cs.mass)
    << " within 1e-3, band-order violations " << bad << " == 0";
  return {ok, d.str()};
}

Outcome supplement() {
  std::ostringstream d;
  bool ok = true;
  for (ExperimentId id : {ExperimentId::SuppLaguerre, ExperimentId::SuppHermite}) {
    auto cfg = ExperimentConfig::defaults(id);
    cfg.n_values = {5000};
    const auto r = run_supplement(cfg);
    const double h = r.fits.at(0).hellinger;
    ok = ok && h <= 0.2;
    d << to_string(id) << " d_H " << fmt("%.4f", h) << " <= 0.2; ";
  }
  return {ok, d.str()};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "polysieve_acceptance_determinism";
  fs::remove_all(dir);
  std::ostringstream sink;
  const std::vector<std::string> first = {"experiment", "exp2", "--n", "100,500", "--m", "3", "--iterations",
                                          "1500", "--burn-in", "500", "--out", (dir / "a").string()};
  if (cli::run(first, sink, sink) != 0) return {false, "first run failed"};
  const std::vector<std::string> replay = {"experiment", "exp2", "--config",
                                           (dir / "a" / "config.resolved").string(), "--out",
                                           (dir / "b").string()};
  if (cli::run(replay, sink, sink) != 0) return {false, "manifest replay failed"};
  const bool same = read_text_file(dir / "a" / "distances.csv") == read_text_file(dir / "b" / "distances.csv");
  fs::remove_all(dir);
  return {same, same ? "distances.csv byte-identical on manifest replay" : "distances.csv differs"};
}

}  // namespace

int main() {
  criterion(1, "orthogonality", 2, [] {
    const auto r = orthogonality_check(15);
    return Outcome{r.passed, "|<q_i,q_j> - delta gamma_j| <= 1e-10 max(1, gamma_j), i,j <= 15"};
  });
  criterion(2, "derivative coefficients", 2, derivative_suite);
  criterion(3, "divergence closed forms", 1, divergence_suite);
  criterion(4, "shift suite", 30, shift_suite);
  criterion(5, "hardy inequality", 5, [] {
    const auto r = hardy_check(1000, 50, 1);
    return Outcome{r.passed && r.details["violations"] == 0,
                   "violations " + r.details["violations"].dump() + " == 0, max ratio " +
                       fmt("%.4f", r.details["max_ratio"].get<double>())};
  });
  criterion(6, "gamma-tilde growth bands", 5, [] {
    bool ok = true;
    for (BasisFamily f : {BasisFamily::legendre(), BasisFamily::hermite()}) {
      for (int p : {1, 2}) ok = ok && growth_check(f, p).passed;
    }
    return Outcome{ok, "legendre/hermite, p in {1,2}, j in [5,40]"};
  });
  criterion(7, "mcmc prior recovery", 30, prior_recovery);
  criterion(8, "experiment 2 desk scale", 900, experiment2);
  criterion(9, "experiment 1 desk scale", 180, experiment1);
  criterion(10, "supplement desk scale", 300, supplement);
  criterion(11, "determinism", 60, determinism);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
