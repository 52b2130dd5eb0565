#include "polysieve/config.hpp"

#include <algorithm>
#include <charconv>

#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"

namespace polysieve {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  throw InputError("config key '" + std::string(key) + "': expected " + std::string(what) +
                   ", got '" + std::string(value) + "'");
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  Int v{};
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) bad_value(key, text, "an integer");
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  try {
    return parse_double(trim(text));
  } catch (const InputError&) {
    bad_value(key, text, "a number");
  }
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

constexpr std::string_view kFitKeys[] = {
    "family", "p", "n", "k", "sigmas", "theoretical", "mcmc.iterations", "mcmc.burn_in",
    "mcmc.proposal_scale", "mcmc.adapt", "seed", "data", "grid", "level", "true_density"};

constexpr std::string_view kExperimentKeys[] = {
    "n", "m", "p", "k", "sigmas", "theoretical", "mcmc.iterations", "mcmc.burn_in",
    "mcmc.proposal_scale", "mcmc.adapt", "seed", "grid", "basis", "threads", "paper_scale"};

TrueDensityKind default_true_density(BasisFamily family) {
  switch (family.weight_tag()) {
    case WeightTag::Exponential: return TrueDensityKind::SuppExponential;
    case WeightTag::Gaussian: return TrueDensityKind::SuppGaussian;
    default: return TrueDensityKind::Exp1Sine;
  }
}

void read_mcmc(const KeyValues& kv, McmcConfig& m) {
  m.iterations = kv.get_int("mcmc.iterations", m.iterations);
  m.burn_in = kv.get_int("mcmc.burn_in", m.burn_in);
  m.proposal_scale = kv.get_double("mcmc.proposal_scale", m.proposal_scale);
  m.adapt = kv.get_bool("mcmc.adapt", m.adapt);
  try {
    m.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

void write_mcmc(KeyValues& kv, const McmcConfig& m) {
  kv.set("mcmc.iterations", std::to_string(m.iterations));
  kv.set("mcmc.burn_in", std::to_string(m.burn_in));
  kv.set("mcmc.proposal_scale", format_double(m.proposal_scale));
  kv.set("mcmc.adapt", m.adapt ? "true" : "false");
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw InputError("config line " + std::to_string(line_no) + ": empty key");
    if (kv.has(key)) {
      throw InputError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv.entries_.emplace_back(key, value);
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

void KeyValues::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool KeyValues::has(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> KeyValues::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValues::require(std::string_view key) const {
  auto v = get(key);
  if (!v) throw InputError("config key '" + std::string(key) + "' is required");
  return *v;
}

void KeyValues::check_known(std::span<const std::string_view> allowed) const {
  for (const auto& [k, v] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw InputError("unknown config key '" + k + "'");
    }
  }
}

int KeyValues::get_int(std::string_view key, int fallback) const {
  const auto v = get(key);
  return v ? parse_integer<int>(key, *v) : fallback;
}

std::uint64_t KeyValues::get_u64(std::string_view key, std::uint64_t fallback) const {
  const auto v = get(key);
  return v ? parse_integer<std::uint64_t>(key, *v) : fallback;
}

double KeyValues::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  return v ? parse_real(key, *v) : fallback;
}

bool KeyValues::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  bad_value(key, *v, "true or false");
}

std::vector<double> KeyValues::get_doubles(std::string_view key) const {
  std::vector<double> out;
  const auto v = get(key);
  if (!v) return out;
  for (const auto& field : split_fields(*v)) out.push_back(parse_real(key, field));
  return out;
}

std::vector<int> KeyValues::get_ints(std::string_view key) const {
  std::vector<int> out;
  const auto v = get(key);
  if (!v) return out;
  for (const auto& field : split_fields(*v)) out.push_back(parse_integer<int>(key, field));
  return out;
}

std::string KeyValues::dump() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

int FitConfig::resolved_k() const {
  if (k) return *k;
  if (!sigmas.empty()) return int(sigmas.size()) - 1;
  return k_n_rule(n, p, KnVariant::Exp2);
}

KeyValues FitConfig::to_key_values() const {
  KeyValues kv;
  kv.set("family", std::string(family.name()));
  kv.set("p", std::to_string(p));
  kv.set("n", std::to_string(n));
  kv.set("k", std::to_string(resolved_k()));
  if (sigmas.empty()) {
    kv.set("theoretical", "true");
  } else {
    kv.set("sigmas", join(sigmas));
  }
  write_mcmc(kv, mcmc);
  kv.set("seed", std::to_string(seed));
  if (data) kv.set("data", data->string());
  kv.set("grid", std::to_string(grid_points));
  kv.set("level", format_double(level));
  kv.set("true_density", std::string(to_string(true_density)));
  return kv;
}

std::span<const std::string_view> fit_keys() { return kFitKeys; }
std::span<const std::string_view> experiment_keys() { return kExperimentKeys; }

FitConfig resolve_fit_config(const KeyValues& kv) {
  kv.check_known(fit_keys());
  FitConfig c;
  try {
    c.family = BasisFamily::parse(kv.require("family"));
  } catch (const InputError& e) {
    if (!kv.has("family")) throw;
    throw InputError(std::string("config key 'family': ") + e.what());
  }
  if (c.family.kind() == FamilyKind::GeneralizedLegendre) {
    throw InputError("config key 'family': fit the equivalent 'legendre' expansion instead");
  }
  c.p = kv.get_int("p", 2);
  if (c.p < 1) throw InputError("config key 'p' must be >= 1");
  if (kv.has("data")) c.data = kv.require("data");
  c.n = kv.get_int("n", 0);
  if (!c.data && c.n < 1) throw InputError("config key 'n' is required (>= 1) without 'data'");
  if (kv.has("k")) {
    c.k = kv.get_int("k", 0);
    if (*c.k < 1 || *c.k > kMaxDegree) throw InputError("config key 'k' must lie in [1, 200]");
  }
  const bool theoretical = kv.get_bool("theoretical", false);
  if (theoretical && kv.has("sigmas")) {
    throw InputError("config keys 'sigmas' and 'theoretical' are mutually exclusive");
  }
  if (!theoretical && !kv.has("sigmas")) {
    throw InputError("config needs either 'sigmas' or 'theoretical = true'");
  }
  c.sigmas = kv.get_doubles("sigmas");
  for (double s : c.sigmas) {
    if (!(s >= 0)) throw InputError("config key 'sigmas': values must be >= 0");
  }
  if (c.k && !c.sigmas.empty() && int(c.sigmas.size()) < *c.k + 1) {
    throw InputError("config key 'sigmas': needs k + 1 entries");
  }
  if (c.family.kind() == FamilyKind::Trigonometric && c.sigmas.empty()) {
    throw InputError("config key 'theoretical': the trigonometric family needs explicit sigmas");
  }
  read_mcmc(kv, c.mcmc);
  c.seed = kv.get_u64("seed", 1);
  c.grid_points = kv.get_int("grid", 401);
  if (c.grid_points < 3) throw InputError("config key 'grid' must be >= 3");
  c.level = kv.get_double("level", 0.95);
  if (!(c.level >= 0 && c.level <= 1)) throw InputError("config key 'level' must lie in [0, 1]");
  c.true_density = kv.has("true_density") ? parse_true_density_kind(kv.require("true_density"))
                                          : default_true_density(c.family);
  if (c.true_density == TrueDensityKind::CoefficientBacked) {
    throw InputError("config key 'true_density': use 'data' for external samples");
  }
  return c;
}

ExperimentConfig resolve_experiment_config(ExperimentId id, const KeyValues& kv) {
  kv.check_known(experiment_keys());
  ExperimentConfig c = ExperimentConfig::defaults(id, kv.get_bool("paper_scale", false));
  if (kv.has("n")) c.n_values = kv.get_ints("n");
  c.m = kv.get_int("m", c.m);
  c.p = kv.get_int("p", c.p);
  if (kv.has("k")) c.k = kv.get_int("k", 0);
  const bool theoretical = kv.get_bool("theoretical", false);
  if (theoretical && kv.has("sigmas")) {
    throw InputError("config keys 'sigmas' and 'theoretical' are mutually exclusive");
  }
  if (theoretical) c.sigmas.clear();
  if (kv.has("sigmas")) c.sigmas = kv.get_doubles("sigmas");
  if (id != ExperimentId::Exp2 && c.sigmas.empty() && !c.k) {
    throw InputError("config key 'k' is required with a theoretical prior for this experiment");
  }
  read_mcmc(kv, c.mcmc);
  c.seed = kv.get_u64("seed", c.seed);
  c.grid_points = kv.get_int("grid", c.grid_points);
  if (kv.has("basis")) c.basis = parse_exp1_basis(kv.require("basis"));
  c.threads = kv.get_int("threads", c.threads);
  try {
    c.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return c;
}

KeyValues experiment_to_key_values(const ExperimentConfig& c) {
  KeyValues kv;
  kv.set("n", join(c.n_values));
  kv.set("m", std::to_string(c.m));
  kv.set("p", std::to_string(c.p));
  if (c.k) kv.set("k", std::to_string(*c.k));
  if (c.sigmas.empty()) {
    kv.set("theoretical", "true");
  } else {
    kv.set("sigmas", join(c.sigmas));
  }
  write_mcmc(kv, c.mcmc);
  kv.set("seed", std::to_string(c.seed));
  kv.set("grid", std::to_string(c.grid_points));
  if (c.id == ExperimentId::Exp1) kv.set("basis", std::string(to_string(c.basis)));
  kv.set("threads", std::to_string(c.threads));
  kv.set("paper_scale", c.paper_scale ? "true" : "false");
  return kv;
}

}  // namespace polysieve
