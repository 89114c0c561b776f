#include "cbank/coefficients.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cbank/errors.hpp"
#include "cbank/version.hpp"

namespace cbank {

namespace {

// Indices (within a, b, c) of the coefficients constrained to be >= 0.
constexpr std::size_t kSurgeNonneg[] = {kAudot, kAu, kAuu};
constexpr std::size_t kSwayNonneg[] = {kBvdot, kBv, kBvv};
constexpr std::size_t kYawNonneg[] = {kCrdot, kCr, kCrr};

template <std::size_t n>
nlohmann::json block_to_json(const std::array<double, n>& values,
                             const std::array<const char*, n>& names) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < n; ++i) j[names[i]] = values[i];
  return j;
}

template <std::size_t n>
std::array<double, n> block_from_json(const nlohmann::json& j,
                                      const std::array<const char*, n>& names,
                                      const char* block) {
  if (!j.is_object()) {
    throw SchemaError(std::string("coefficients: block \"") + block +
                      "\" is not an object");
  }
  std::array<double, n> values{};
  for (std::size_t i = 0; i < n; ++i) {
    if (!j.contains(names[i])) {
      throw SchemaError(std::string("coefficients: missing field \"") +
                        names[i] + "\"");
    }
    values[i] = j.at(names[i]).template get<double>();
  }
  return values;
}

}  // namespace

bool CoefficientSet::satisfies_constraints() const {
  if (b[kBrdot] != c[kCvdot]) return false;
  for (auto i : kSurgeNonneg)
    if (a[i] < 0.0) return false;
  for (auto i : kSwayNonneg)
    if (b[i] < 0.0) return false;
  for (auto i : kYawNonneg)
    if (c[i] < 0.0) return false;
  return true;
}

bool added_mass_positive_definite(const CoefficientSet& coeffs) {
  const double bv = coeffs.b[kBvdot];
  const double cr = coeffs.c[kCrdot];
  const double off = coeffs.b[kBrdot];
  return bv > 0.0 && bv * cr - off * off > 0.0;
}

nlohmann::json coefficients_to_json(const CoefficientSet& coeffs,
                                    const nlohmann::json& provenance) {
  nlohmann::json doc;
  doc["a"] = block_to_json(coeffs.a, kSurgeNames);
  doc["b"] = block_to_json(coeffs.b, kSwayNames);
  doc["c"] = block_to_json(coeffs.c, kYawNames);

  const SolveDiagnostics& d = coeffs.diagnostics;
  nlohmann::json diag;
  diag["rank"] = {d.rank[0], d.rank[1], d.rank[2]};
  diag["condition"] = {d.condition[0], d.condition[1], d.condition[2]};
  diag["train_mse"] = {d.train_mse[0], d.train_mse[1], d.train_mse[2]};
  diag["validation_mse"] = {d.validation_mse[0], d.validation_mse[1],
                            d.validation_mse[2]};
  diag["kkt_residual"] = d.kkt_residual;
  diag["pinned"] = d.pinned;
  diag["active_bounds"] = d.active_bounds;
  diag["warnings"] = d.warnings;
  doc["diagnostics"] = diag;
  if (!provenance.is_null()) doc["provenance"] = provenance;
  return doc;
}

nlohmann::json coefficients_to_json(const CoefficientSet& coeffs) {
  return coefficients_to_json(coeffs, nlohmann::json());
}

CoefficientSet coefficients_from_json(const nlohmann::json& doc) {
  CoefficientSet coeffs;
  for (const char* block : {"a", "b", "c"}) {
    if (!doc.contains(block)) {
      throw SchemaError(std::string("coefficients: missing block \"") + block + "\"");
    }
  }
  coeffs.a = block_from_json<3>(doc.at("a"), kSurgeNames, "a");
  coeffs.b = block_from_json<7>(doc.at("b"), kSwayNames, "b");
  coeffs.c = block_from_json<7>(doc.at("c"), kYawNames, "c");

  if (doc.contains("diagnostics")) {
    const auto& diag = doc.at("diagnostics");
    SolveDiagnostics& d = coeffs.diagnostics;
    if (diag.contains("rank"))
      for (int i = 0; i < 3; ++i) d.rank[i] = diag.at("rank").at(i).get<int>();
    if (diag.contains("condition"))
      for (int i = 0; i < 3; ++i)
        d.condition[i] = diag.at("condition").at(i).get<double>();
    if (diag.contains("train_mse"))
      for (int i = 0; i < 3; ++i)
        d.train_mse[i] = diag.at("train_mse").at(i).get<double>();
    if (diag.contains("validation_mse"))
      for (int i = 0; i < 3; ++i)
        d.validation_mse[i] = diag.at("validation_mse").at(i).get<double>();
    if (diag.contains("kkt_residual"))
      d.kkt_residual = diag.at("kkt_residual").get<double>();
    if (diag.contains("pinned"))
      d.pinned = diag.at("pinned").get<std::vector<std::string>>();
    if (diag.contains("active_bounds"))
      d.active_bounds = diag.at("active_bounds").get<std::vector<std::string>>();
    if (diag.contains("warnings"))
      d.warnings = diag.at("warnings").get<std::vector<std::string>>();
  }
  return coeffs;
}

void save_coefficients(const std::string& path, const CoefficientSet& coeffs,
                       const nlohmann::json& provenance) {
  nlohmann::json doc = coefficients_to_json(coeffs, provenance);
  doc["tool"] = "cbank";
  doc["version"] = kVersion;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ValueError("cannot write file: " + tmp);
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

CoefficientSet load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValueError("cannot open coefficients file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return coefficients_from_json(doc);
}

}  // namespace cbank
