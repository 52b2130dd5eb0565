#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polysieve/cli.hpp"
#include "polysieve/config.hpp"
#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"

using namespace polysieve;
namespace fs = std::filesystem;

namespace {
struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("polysieve_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "fit.cfg";
  write_text_file(p, text);
  return p;
}

const char* kMinimalFit =
    "family = legendre\n"
    "n = 500\n"
    "p = 2\n"
    "theoretical = true\n"
    "mcmc.iterations = 2000\n"
    "mcmc.burn_in = 500\n";
}  // namespace

TEST_CASE("minimal fit writes its four outputs and a manifest") {
  const fs::path dir = scratch("fit");
  const fs::path cfg = write_config(dir, kMinimalFit);
  const auto r = run({"fit", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  for (const char* f : {"chain.csv", "curves.csv", "report.json", "plot.svg", "manifest.json"}) {
    CHECK(fs::exists(dir / "out" / f));
  }
  const auto manifest = nlohmann::json::parse(read_text_file(dir / "out" / "manifest.json"));
  for (const auto& p : manifest["outputs"]) CHECK(fs::exists(p.get<std::string>()));
  CHECK(manifest["command"] == "fit");
  CHECK(manifest["resolved_config"]["family"] == "legendre");

  // The resolved config alone reproduces the run.
  const auto again = run({"fit", "--config", (dir / "out" / "config.resolved").string(), "--out",
                          (dir / "again").string()});
  CHECK(again.code == 0);
  CHECK(read_text_file(dir / "out" / "chain.csv") == read_text_file(dir / "again" / "chain.csv"));
}

TEST_CASE("schema violations exit 2 and name the field") {
  const fs::path dir = scratch("schema");
  auto r = run({"fit", "--config", write_config(dir, "n = 500\ntheoretical = true\n").string(), "--out",
                (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("family") != std::string::npos);

  r = run({"fit", "--config",
           write_config(dir, "family = legendre\nn = 500\ntheoretical = true\nmcmc.iterations = 100\nmcmc.burn_in = 100\n")
               .string(),
           "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("burn_in") != std::string::npos);

  r = run({"fit", "--config", write_config(dir, "family = legendre\nn = 500\ntheoretical = true\nsigmaz = 1\n").string(),
           "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("sigmaz") != std::string::npos);

  r = run({"fit", "--config", write_config(dir, "family = legendre\nn = 500\n").string(), "--out",
           (dir / "o").string()});
  CHECK(r.code == 2);

  r = run({"fit", "--config", (dir / "missing.cfg").string()});
  CHECK(r.code == 2);
}

TEST_CASE("unknown experiment ids and suites") {
  CHECK(run({"experiment", "exp9"}).code == 2);
  CHECK(run({"check", "nonsense"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("check suites exit 0") {
  const auto o = run({"check", "orthogonality"});
  CHECK(o.code == 0);
  const auto h = run({"check", "hardy", "--trials", "1000"});
  CHECK(h.code == 0);
  CHECK(h.out.find("max_ratio") != std::string::npos);
  const auto g = run({"check", "growth", "--family", "hermite", "--p", "2"});
  CHECK(g.code == 0);
  CHECK(run({"check", "divergence"}).code == 0);
}

TEST_CASE("experiment runs are byte-identical from the manifest") {
  const fs::path dir = scratch("exp");
  const std::vector<std::string> base = {"experiment", "exp2", "--n", "100,200", "--m", "2",
                                         "--iterations", "1200", "--burn-in", "400", "--seed", "7"};
  auto args = base;
  args.insert(args.end(), {"--out", (dir / "a").string(), "--threads", "1"});
  REQUIRE(run(args).code == 0);
  const auto csv = read_text_file(dir / "a" / "distances.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2);
  for (const char* f : {"report.json", "curves.csv", "plot.svg", "manifest.json", "config.resolved"}) {
    CHECK(fs::exists(dir / "a" / f));
  }
  const auto replay = run({"experiment", "exp2", "--config", (dir / "a" / "config.resolved").string(), "--out",
                           (dir / "b").string(), "--threads", "2"});
  CHECK(replay.code == 0);
  CHECK(read_text_file(dir / "b" / "distances.csv") == csv);
  CHECK(read_text_file(dir / "b" / "report.json") == read_text_file(dir / "a" / "report.json"));
}

TEST_CASE("sample writes a single-column CSV") {
  const fs::path dir = scratch("sample");
  const auto r = run({"sample", "--family", "laguerre", "--true-density", "supp-exponential", "--n", "25",
                      "--seed", "3", "--out", (dir / "y.csv").string()});
  CHECK(r.code == 0);
  CHECK(read_observations_csv(dir / "y.csv").size() == 25);
}

TEST_CASE("fit from an external data file") {
  const fs::path dir = scratch("data");
  REQUIRE(run({"sample", "--family", "hermite", "--true-density", "supp-gaussian", "--n", "300", "--out",
               (dir / "y.csv").string()})
              .code == 0);
  const std::string cfg = "family = hermite\nn = 300\nsigmas = 0.8, 0.42, 0.05\ndata = " +
                          (dir / "y.csv").string() + "\nmcmc.iterations = 1500\nmcmc.burn_in = 500\n";
  CHECK(run({"fit", "--config", write_config(dir, cfg).string(), "--out", (dir / "o").string()}).code == 0);
}

TEST_CASE("key-value parsing") {
  const auto kv = KeyValues::parse("# comment\n a = 1 \n\nlist = 1, 2,3\nflag = true\n");
  CHECK(kv.get_int("a", 0) == 1);
  CHECK(kv.get_doubles("list") == std::vector<double>{1, 2, 3});
  CHECK(kv.get_bool("flag", false));
  CHECK_THROWS_AS(KeyValues::parse("a = 1\na = 2\n"), InputError);
  CHECK_THROWS_AS(KeyValues::parse("novalue\n"), InputError);
  CHECK_THROWS_AS(KeyValues::parse("a = x\n").get_int("a", 0), InputError);
  CHECK(KeyValues::parse(kv.dump()).entries() == kv.entries());
}

TEST_CASE("thread count resolution") {
  CHECK(cli::resolve_threads(3) == 3);
  CHECK(cli::resolve_threads(0) >= 1);
}
