#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polysieve/basis.hpp"
#include "polysieve/cli.hpp"
#include "polysieve/divergence.hpp"
#include "polysieve/errors.hpp"
#include "polysieve/experiments.hpp"
#include "polysieve/inference.hpp"
#include "polysieve/quadrature.hpp"
#include "polysieve/sampling.hpp"

namespace py = pybind11;
using namespace polysieve;

namespace {

BasisFamily family(const std::string& name) { return BasisFamily::parse(name); }

WeightTag weight_tag(const std::string& name) { return family(name).weight_tag(); }

// Runs an experiment and returns report.json as a string.
std::string experiment_json(const std::string& id, std::vector<int> n, int m, int iterations, int burn_in,
                            std::uint64_t seed, int threads) {
  auto cfg = ExperimentConfig::defaults(parse_experiment_id(id));
  if (!n.empty()) cfg.n_values = std::move(n);
  if (m > 0) cfg.m = m;
  if (iterations > 0) cfg.mcmc.iterations = iterations;
  if (burn_in >= 0) cfg.mcmc.burn_in = burn_in;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.validate();
  py::gil_scoped_release release;
  return run_experiment(cfg).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_polysieve, mod) {
  mod.doc() = "Orthogonal-series sieve priors for density estimation";

  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<CapabilityError>(mod, "CapabilityError", PyExc_OverflowError);
  py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);

  mod.def("eval", [](const std::string& f, int j, double x) { return family(f).eval(j, x); },
          py::arg("family"), py::arg("j"), py::arg("x"));
  mod.def("weight", [](const std::string& f, double x) { return family(f).weight(x); },
          py::arg("family"), py::arg("x"));
  mod.def("gamma", [](const std::string& f, int j) { return family(f).gamma(j); }, py::arg("family"),
          py::arg("j"));
  mod.def("log_gamma", [](const std::string& f, int j) { return family(f).log_gamma(j); },
          py::arg("family"), py::arg("j"));
  mod.def("derivative_coeffs",
          [](const std::string& f, int j, int l) { return derivative_coeffs(family(f), j, l); },
          py::arg("family"), py::arg("j"), py::arg("l"));
  mod.def(
      "gamma_tilde",
      [](const std::string& f, int j, int p, const std::string& mode) {
        if (mode != "lemma" && mode != "sieve") throw InputError("mode must be 'lemma' or 'sieve'");
        return gamma_tilde(family(f), j, p, mode == "lemma" ? GammaTildeMode::Lemma : GammaTildeMode::Sieve);
      },
      py::arg("family"), py::arg("j"), py::arg("p"), py::arg("mode") = "lemma");
  mod.def(
      "gauss_rule",
      [](const std::string& f, int m) {
        const auto r = gauss_rule(weight_tag(f), m);
        return py::make_tuple(r.nodes, r.weights);
      },
      py::arg("family"), py::arg("m"), "Nodes and weights of the m-point rule for a family's weight.");
  mod.def(
      "k_n",
      [](double n, int p, const std::string& variant) {
        if (variant != "exp1" && variant != "exp2") throw InputError("variant must be 'exp1' or 'exp2'");
        return k_n_rule(n, p, variant == "exp1" ? KnVariant::Exp1 : KnVariant::Exp2);
      },
      py::arg("n"), py::arg("p") = 2, py::arg("variant") = "exp2");
  mod.def("theoretical_sigmas",
          [](const std::string& f, int p, int k) { return theoretical_sigmas(family(f), p, k).sigmas; },
          py::arg("family"), py::arg("p"), py::arg("k"));
  mod.def(
      "draw",
      [](const std::string& kind, const std::string& f, std::size_t n, std::uint64_t seed) {
        return draw(TrueDensitySpec::build(parse_true_density_kind(kind), family(f)), n, seed);
      },
      py::arg("kind"), py::arg("family"), py::arg("n"), py::arg("seed") = 1);
  mod.def(
      "hellinger_sq",
      [](const std::string& f, std::vector<double> a, std::vector<double> b) {
        return hellinger_sq(WeightedDensity::from_coefficients(CoefficientVector(family(f), std::move(a))),
                            WeightedDensity::from_coefficients(CoefficientVector(family(f), std::move(b))));
      },
      py::arg("family"), py::arg("eta1"), py::arg("eta2"));
  mod.def(
      "hardy_check",
      [](int trials, int J, std::uint64_t seed) {
        const auto r = hardy_check(trials, J, seed);
        return py::make_tuple(r.passed, r.details["max_ratio"].get<double>());
      },
      py::arg("trials") = 1000, py::arg("J") = 50, py::arg("seed") = 1);
  mod.def("run_experiment", &experiment_json, py::arg("id"), py::arg("n") = std::vector<int>{},
          py::arg("m") = 0, py::arg("iterations") = 0, py::arg("burn_in") = -1, py::arg("seed") = 1,
          py::arg("threads") = 1, "Runs an experiment and returns its report as JSON text.");
  mod.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
  mod.attr("HARDY_CONSTANT") = kHardyConstant;
}
