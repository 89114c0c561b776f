#include "cbank/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <system_error>

#include "cbank/errors.hpp"

namespace cbank {

namespace {

constexpr std::array<const char*, 14> kColumns = {
    "t", "x", "y", "psi", "u", "v", "r", "udot", "vdot", "rdot", "z", "X", "Y", "N"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_field(const std::string& text, int lineno, const char* column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("row " + std::to_string(lineno) + ": bad value \"" + text +
                     "\" in column " + column);
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(lineno) + ": non-finite value in column " +
                     std::string(column));
  }
  return value;
}

void format_double(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

double& field_ref(CaptiveRecord& rec, std::size_t column) {
  double* fields[] = {&rec.t, &rec.x, &rec.y, &rec.psi, &rec.u,  &rec.v,  &rec.r,
                      &rec.udot, &rec.vdot, &rec.rdot, &rec.z, &rec.X, &rec.Y, &rec.N};
  return *fields[column];
}

double field_value(const CaptiveRecord& rec, std::size_t column) {
  const double* fields[] = {&rec.t, &rec.x, &rec.y, &rec.psi, &rec.u,  &rec.v,  &rec.r,
                            &rec.udot, &rec.vdot, &rec.rdot, &rec.z, &rec.X, &rec.Y, &rec.N};
  return *fields[column];
}

// Unbiased bounded draw via rejection, fully determined by the mt19937_64
// stream so splits are identical across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

// Deterministic zero-mean unit-variance Gaussian stream (Box-Muller).
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

CaptiveDataset load_csv(const std::string& path, const VesselGeometry& vessel,
                        const CanalGeometry& canal) {
  std::ifstream in(path);
  if (!in) throw ValueError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = split_fields(line);

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (index.count(header[i])) {
      throw SchemaError(path + ": duplicate column \"" + header[i] + "\"");
    }
    index[header[i]] = i;
  }
  std::array<std::size_t, kColumns.size()> col{};
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    auto it = index.find(kColumns[i]);
    if (it == index.end()) {
      throw SchemaError(path + ": missing column \"" + kColumns[i] + "\"");
    }
    col[i] = it->second;
    index.erase(it);
  }
  bool has_label = false;
  std::size_t label_col = 0;
  if (auto it = index.find("label"); it != index.end()) {
    has_label = true;
    label_col = it->second;
    index.erase(it);
  }
  if (!index.empty()) {
    throw SchemaError(path + ": unknown column \"" + index.begin()->first + "\"");
  }

  CaptiveDataset dataset;
  dataset.vessel = vessel;
  dataset.canal = canal;

  std::map<char, double> last_t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    CaptiveRecord rec;
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
      field_ref(rec, i) = parse_field(fields[col[i]], lineno, kColumns[i]);
    }
    if (has_label) {
      const std::string& tag = fields[label_col];
      if (tag.size() != 1 || tag[0] < 'A' || tag[0] > 'C') {
        throw ParseError("row " + std::to_string(lineno) +
                         ": label must be one of A, B, C (got \"" + tag + "\")");
      }
      rec.label = tag[0];
    }
    if (!(std::abs(rec.y) < 0.5 * canal.width)) {
      throw ParseError("row " + std::to_string(lineno) +
                       ": transverse position outside the canal (|y| >= W/2)");
    }
    if (auto it = last_t.find(rec.label); it != last_t.end() && !(rec.t > it->second)) {
      throw ParseError("row " + std::to_string(lineno) +
                       ": time not monotone within test " + std::string(1, rec.label));
    }
    last_t[rec.label] = rec.t;
    dataset.records.push_back(rec);
  }
  if (dataset.records.empty()) throw ParseError(path + ": no data rows");
  return dataset;
}

void write_csv(const std::string& path, const CaptiveDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw ValueError("cannot write dataset file: " + path);
  std::string line;
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    line += kColumns[i];
    line += ',';
  }
  line += "label\n";
  out << line;
  for (const CaptiveRecord& rec : dataset.records) {
    line.clear();
    for (std::size_t i = 0; i < kColumns.size(); ++i) {
      format_double(line, field_value(rec, i));
      line += ',';
    }
    line += rec.label;
    line += '\n';
    out << line;
  }
  if (!out) throw ValueError("write failed: " + path);
}

void append(CaptiveDataset& into, const CaptiveDataset& other) {
  const bool same_vessel = into.vessel.length == other.vessel.length &&
                           into.vessel.beam == other.vessel.beam &&
                           into.vessel.draft == other.vessel.draft &&
                           into.vessel.cb == other.vessel.cb &&
                           into.vessel.mass == other.vessel.mass &&
                           into.vessel.iz == other.vessel.iz &&
                           into.vessel.xg == other.vessel.xg;
  const bool same_canal = into.canal.width == other.canal.width &&
                          into.canal.depth == other.canal.depth &&
                          into.canal.rho == other.canal.rho;
  if (!same_vessel || !same_canal) {
    throw ValueError("cannot append datasets with different geometry");
  }
  into.records.insert(into.records.end(), other.records.begin(),
                      other.records.end());
}

SplitDataset split(const CaptiveDataset& dataset, double fraction,
                   std::uint64_t seed) {
  if (dataset.records.empty()) throw ValueError("cannot split an empty dataset");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ValueError("split fraction must be in (0, 1)");
  }
  const std::size_t m = dataset.records.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;

  std::mt19937_64 rng(seed);
  for (std::size_t i = m - 1; i > 0; --i) {  // Fisher-Yates
    const std::size_t j = bounded(rng, i + 1);
    std::swap(order[i], order[j]);
  }

  // Round half up: ties go toward the training set.
  auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m)));
  n_train = std::min(n_train, m);

  SplitDataset s;
  s.seed = seed;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  return s;
}

CaptiveDataset synthesize(const VesselGeometry& vessel,
                          const CanalGeometry& canal,
                          const CoefficientSet& truth, const Scenario& scenario,
                          double u0, double duration, double dt,
                          const NoiseStd& noise, std::uint64_t seed,
                          char label) {
  if (!(dt > 0.0)) throw ValueError("dt must be > 0");
  if (!(duration >= dt)) throw ValueError("duration must be >= dt");
  if (!(scenario.period > 0.0)) throw ValueError("scenario period must be > 0");
  if (scenario.amplitude < 0.0) throw ValueError("scenario amplitude must be >= 0");
  if (label < 'A' || label > 'C') throw ValueError("label must be one of A, B, C");
  if (scenario.kind == ScenarioKind::kHarmonicYaw &&
      scenario.amplitude >= kMaxHeading) {
    throw DomainError("yaw amplitude reaches the transverse singularity");
  }

  const double omega = 2.0 * std::numbers::pi / scenario.period;
  const auto count = static_cast<std::size_t>(std::llround(duration / dt));

  CaptiveDataset dataset;
  dataset.vessel = vessel;
  dataset.canal = canal;
  dataset.records.reserve(count);

  GaussianSampler gauss(seed);
  double x_yaw = 0.0;  // accumulated along-track position for harmonic yaw

  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * dt;
    CaptiveRecord rec;
    rec.t = t;
    rec.u = u0;
    rec.label = label;

    if (scenario.kind == ScenarioKind::kHarmonicSway) {
      const double a = scenario.amplitude;
      rec.y = a * std::sin(omega * t);
      rec.v = a * omega * std::cos(omega * t);
      rec.vdot = -a * omega * omega * std::sin(omega * t);
      rec.x = u0 * t;
    } else {
      // Pure-yaw captive test: the model tracks a serpentine path with the
      // heading tangent to it, so the sway velocity is identically zero.
      const double a = scenario.amplitude;
      rec.psi = a * std::sin(omega * t);
      rec.r = a * omega * std::cos(omega * t);
      rec.rdot = -a * omega * omega * std::sin(omega * t);
      // Pose follows xdot = u0 cos(psi), ydot = u0 sin(psi); Simpson per
      // step keeps the stored path consistent to well below measurement
      // relevance.
      auto psi_at = [&](double tt) { return a * std::sin(omega * tt); };
      rec.x = x_yaw;
      rec.y = y_yaw;
      const double tm = t + 0.5 * dt;
      const double tp = t + dt;
      x_yaw += dt / 6.0 * u0 *
               (std::cos(psi_at(t)) + 4.0 * std::cos(psi_at(tm)) + std::cos(psi_at(tp)));
      y_yaw += dt / 6.0 * u0 *
               (std::sin(psi_at(t)) + 4.0 * std::sin(psi_at(tm)) + std::sin(psi_at(tp)));
    }

    const auto forces =
        predict_measured_forces(rec.motion(), truth, vessel, canal);
    rec.X = forces[0] + noise.X * (noise.X > 0.0 ? gauss.next() : 0.0);
    rec.Y = forces[1] + noise.Y * (noise.Y > 0.0 ? gauss.next() : 0.0);
    rec.N = forces[2] + noise.N * (noise.N > 0.0 ? gauss.next() : 0.0);
    dataset.records.push_back(rec);
  }
  return dataset;
}

}  // namespace cbank
