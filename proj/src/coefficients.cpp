#include "polysieve/coefficients.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "polysieve/errors.hpp"
#include "polysieve/io.hpp"

namespace polysieve {

CoefficientVector::CoefficientVector(BasisFamily family, std::vector<double> values,
                                     bool normalized)
    : family_(family), values_(std::move(values)), normalized_(normalized) {
  if (values_.empty()) throw InputError("coefficient vector must not be empty");
  if (static_cast<int>(values_.size()) - 1 > kMaxDegree) {
    throw CapabilityError("coefficient vector longer than the supported degree cap");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InputError("coefficient vector entries must be finite");
  }
  if (normalized_ && std::abs(values_[0] * family_.gamma(0) - 1.0) > 1e-10) {
    throw InputError("vector flagged normalized but eta_0 * gamma_0 != 1");
  }
}

CoefficientVector generalized_to_standard(std::span<const double> eta_tilde) {
  const int n = static_cast<int>(eta_tilde.size()) - 1;
  if (n < 1) throw InputError("generalized Legendre conversion needs N >= 1");
  std::vector<double> eta(n + 1);
  for (int j = 0; j <= n; ++j) {
    eta[j] = eta_tilde[j] / std::sqrt(4.0 * j + 6.0);
    if (j <= n - 2) eta[j] -= eta_tilde[j + 2] / std::sqrt(4.0 * j + 14.0);
  }
  return CoefficientVector(BasisFamily::legendre(), std::move(eta));
}

std::string to_csv(const CoefficientVector& eta) {
  std::string out(eta.family().name());
  out += ',';
  out += std::to_string(eta.truncation());
  out += ',';
  out += csv_row(eta.values());
  return out;
}

CoefficientVector coefficients_from_csv(const std::string& line) {
  const auto fields = split_fields(line);
  if (fields.size() < 3) throw InputError("coefficient record needs family, N and values");
  const BasisFamily family = BasisFamily::parse(fields[0]);
  const double n = parse_double(fields[1]);
  if (n != std::floor(n) || n < 0) throw InputError("bad truncation field '" + fields[1] + "'");
  std::vector<double> values;
  for (std::size_t i = 2; i < fields.size(); ++i) values.push_back(parse_double(fields[i]));
  if (values.size() != static_cast<std::size_t>(n) + 1) {
    throw InputError("truncation N does not match the number of values");
  }
  return CoefficientVector(family, std::move(values));
}

std::string to_json(const CoefficientVector& eta) {
  nlohmann::json j;
  j["family"] = std::string(eta.family().name());
  j["N"] = eta.truncation();
  // Values as strings keep all 17 digits independent of the JSON writer.
  nlohmann::json vals = nlohmann::json::array();
  for (double v : eta.values()) vals.push_back(format_double(v));
  j["values"] = std::move(vals);
  return j.dump();
}

CoefficientVector coefficients_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad coefficient JSON: ") + e.what());
  }
  if (!j.contains("family") || !j.contains("N") || !j.contains("values")) {
    throw InputError("coefficient JSON needs family, N and values");
  }
  const BasisFamily family = BasisFamily::parse(j["family"].get<std::string>());
  std::vector<double> values;
  for (const auto& v : j["values"]) {
    values.push_back(v.is_string() ? parse_double(v.get<std::string>()) : v.get<double>());
  }
  if (values.size() != j["N"].get<std::size_t>() + 1) {
    throw InputError("truncation N does not match the number of values");
  }
  return CoefficientVector(family, std::move(values));
}

}  // namespace polysieve
