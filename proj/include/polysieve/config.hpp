#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polysieve/experiments.hpp"

namespace polysieve {

/// Flat `key = value` configuration text.
///
/// One entry per line, '#' starts a comment, blank lines are ignored, list
/// values are comma separated. Repeated keys are an error. Entries keep their
/// file order so dump() is stable.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string require(std::string_view key) const;

  /// Throws InputError naming the first key not in `allowed`.
  void check_known(std::span<const std::string_view> allowed) const;

  int get_int(std::string_view key, int fallback) const;
  std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<double> get_doubles(std::string_view key) const;
  std::vector<int> get_ints(std::string_view key) const;

  std::string dump() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Settings of a single posterior fit.
struct FitConfig {
  BasisFamily family = BasisFamily::legendre();
  int p = 2;
  int n = 0;
  std::optional<int> k;  // highest coefficient index
  std::vector<double> sigmas;  // empty: theoretical prior
  McmcConfig mcmc;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> data;
  int grid_points = 401;
  double level = 0.95;
  TrueDensityKind true_density = TrueDensityKind::Exp1Sine;

  int resolved_k() const;
  KeyValues to_key_values() const;
};

/// Keys accepted by `fit` configs.
std::span<const std::string_view> fit_keys();
/// Keys accepted by `experiment` configs.
std::span<const std::string_view> experiment_keys();

/// Validates and converts; InputError messages name the offending key.
FitConfig resolve_fit_config(const KeyValues& kv);
ExperimentConfig resolve_experiment_config(ExperimentId id, const KeyValues& kv);
KeyValues experiment_to_key_values(const ExperimentConfig& cfg);

}  // namespace polysieve
