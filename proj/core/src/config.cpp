#include "cbank/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "cbank/errors.hpp"

namespace cbank {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(where + ": not a number: \"" + text + "\"");
  }
  return value;
}

}  // namespace

void VesselGeometry::validate() const {
  if (!(length > 0)) throw ValueError("vessel length L must be > 0");
  if (!(beam > 0)) throw ValueError("vessel beam B must be > 0");
  if (!(draft > 0)) throw ValueError("vessel draft T0 must be > 0");
  if (!(cb > 0 && cb <= 1)) throw ValueError("block coefficient CB must be in (0, 1]");
  if (!(mass > 0)) throw ValueError("vessel mass m must be > 0");
  if (!(iz > 0)) throw ValueError("vessel inertia Iz must be > 0");
}

void CanalGeometry::validate() const {
  if (!(width > 0)) throw ValueError("canal width W must be > 0");
  if (!(depth > 0)) throw ValueError("canal depth D must be > 0");
  if (!(rho > 0)) throw ValueError("water density rho must be > 0");
}

ModelConfig read_model_config(std::istream& in, const std::string& name) {
  static const char* const kKeys[] = {"L", "B", "T0", "CB", "m",
                                      "Iz", "xG", "W", "D", "rho"};
  std::map<std::string, double> values;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = name + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(where + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw SchemaError(name + ": unknown key \"" + key + "\"");
    if (values.count(key)) throw SchemaError(name + ": duplicate key \"" + key + "\"");
    values[key] = parse_double(value, where);
  }

  for (const char* k : kKeys) {
    if (!values.count(k)) {
      throw SchemaError(name + ": missing key \"" + std::string(k) + "\"");
    }
  }

  ModelConfig config;
  config.vessel.length = values["L"];
  config.vessel.beam = values["B"];
  config.vessel.draft = values["T0"];
  config.vessel.cb = values["CB"];
  config.vessel.mass = values["m"];
  config.vessel.iz = values["Iz"];
  config.vessel.xg = values["xG"];
  config.canal.width = values["W"];
  config.canal.depth = values["D"];
  config.canal.rho = values["rho"];
  config.vessel.validate();
  config.canal.validate();
  if (!(config.canal.width > config.vessel.beam)) {
    throw ValueError(name + ": canal width W must exceed vessel beam B");
  }
  return config;
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValueError("cannot open config file: " + path);
  return read_model_config(in, path);
}

}  // namespace cbank
