#include "cbank/sim.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <thread>

#include "cbank/errors.hpp"
#include "cbank/hydro.hpp"

namespace cbank {

namespace {

// Integration state: (x, y, psi, u, v, r). Sinkage stays at its initial value.
using State6 = std::array<double, 6>;

State6 pack(const PlanarState& s) { return {s.x, s.y, s.psi, s.u, s.v, s.r}; }

PlanarState unpack(const State6& s, double z) {
  return PlanarState{s[0], s[1], s[2], s[3], s[4], s[5], z};
}

struct Dynamics {
  const CoefficientSet& k;
  const VesselGeometry& vessel;
  const CanalGeometry& canal;
  double x_in = 0.0;
  double surge_mass = 0.0;
  double uw_offset = 0.0;
  double z = 0.0;
  bool coriolis = true;
  // inverse of [[b_vdot, b_rdot], [c_vdot, c_rdot]]
  double inv00 = 0.0, inv01 = 0.0, inv10 = 0.0, inv11 = 0.0;

  BankForce bank(const PlanarState& s) const {
    const double u_w = s.u + uw_offset;
    // The Bernoulli model assumes forward flow; no banking for u_w <= 0 or
    // transverse headings.
    if (u_w <= 0.0 || std::abs(s.psi) >= kMaxHeading) return {};
    return bank_force(s, u_w, k.b[kBbank], k.c[kCbank], vessel, canal);
  }

  State6 operator()(const State6& s6) const {
    const PlanarState s = unpack(s6, z);
    const BankForce bf = bank(s);
    double fx = -k.a[kAu] * s.u - k.a[kAuu] * std::abs(s.u) * s.u + x_in;
    double fy = -k.b[kBv] * s.v - k.b[kBr] * s.r -
                k.b[kBvv] * std::abs(s.v) * s.v -
                k.b[kBrr] * std::abs(s.r) * s.r + bf.Y;
    double fn = -k.c[kCv] * s.v - k.c[kCr] * s.r -
                k.c[kCvv] * std::abs(s.v) * s.v -
                k.c[kCrr] * std::abs(s.r) * s.r + bf.N;
    if (coriolis) {
      // Kirchhoff Coriolis/centripetal terms of the lumped mass matrix
      // [[m11, 0, 0], [0, m22, m23], [0, m23, m33]].
      const double m11 = surge_mass;
      const double m22 = k.b[kBvdot];
      const double m23 = k.b[kBrdot];
      fx += (m22 * s.v + m23 * s.r) * s.r;
      fy += -m11 * s.u * s.r;
      fn += (m11 - m22) * s.u * s.v - m23 * s.u * s.r;
    }
    const double cpsi = std::cos(s.psi);
    const double spsi = std::sin(s.psi);
    return {s.u * cpsi - s.v * spsi,
            s.u * spsi + s.v * cpsi,
            s.r,
            fx / surge_mass,
            inv00 * fy + inv01 * fn,
            inv10 * fy + inv11 * fn};
  }
};

State6 rk4(const Dynamics& f, const State6& s, double dt) {
  const State6 k1 = f(s);
  State6 tmp;
  for (int i = 0; i < 6; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
  const State6 k2 = f(tmp);
  for (int i = 0; i < 6; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
  const State6 k3 = f(tmp);
  for (int i = 0; i < 6; ++i) tmp[i] = s[i] + dt * k3[i];
  const State6 k4 = f(tmp);
  State6 next;
  for (int i = 0; i < 6; ++i) {
    next[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return next;
}

struct ResolvedConfig {
  double surge_mass = 0.0;
  double clearance_floor = 0.0;
};

ResolvedConfig resolve(const SimConfig& config, const CoefficientSet& coeffs,
                       const VesselGeometry& vessel) {
  if (!(config.dt > 0.0)) throw ValueError("dt must be > 0");
  if (!(config.t_max >= config.dt)) throw ValueError("t_max must be >= dt");
  ResolvedConfig r;
  r.surge_mass = config.surge_mass < 0.0 ? vessel.mass : config.surge_mass;
  r.clearance_floor =
      config.clearance_floor < 0.0 ? 0.05 * vessel.beam : config.clearance_floor;
  if (!(r.clearance_floor > 0.0)) throw ValueError("clearance floor must be > 0");
  if (r.surge_mass == 0.0) throw SingularMassError("surge mass is zero");

  const double det = coeffs.b[kBvdot] * coeffs.c[kCrdot] -
                     coeffs.b[kBrdot] * coeffs.c[kCvdot];
  const double scale = std::max({std::abs(coeffs.b[kBvdot] * coeffs.c[kCrdot]),
                                 std::abs(coeffs.b[kBrdot] * coeffs.c[kCvdot]), 1.0});
  if (std::abs(det) <= 1e-12 * scale) {
    throw SingularMassError("sway/yaw added-mass matrix is singular");
  }
  return r;
}

Dynamics make_dynamics(const SimConfig& config, const ResolvedConfig& resolved,
                       const CoefficientSet& coeffs,
                       const VesselGeometry& vessel,
                       const CanalGeometry& canal) {
  Dynamics dyn{coeffs, vessel, canal, config.x_in, resolved.surge_mass,
               config.uw_offset, config.initial.z, config.coriolis};
  const double det = coeffs.b[kBvdot] * coeffs.c[kCrdot] -
                     coeffs.b[kBrdot] * coeffs.c[kCvdot];
  dyn.inv00 = coeffs.c[kCrdot] / det;
  dyn.inv01 = -coeffs.b[kBrdot] / det;
  dyn.inv10 = -coeffs.c[kCvdot] / det;
  dyn.inv11 = coeffs.b[kBvdot] / det;
  return dyn;
}

struct GroundingCheck {
  bool grounded = false;
  Side side = Side::kStarboard;
};

GroundingCheck check_grounding(const PlanarState& s,
                               const VesselGeometry& vessel,
                               const CanalGeometry& canal) {
  const double cpsi = std::cos(s.psi);
  const double spsi = std::sin(s.psi);
  const double half_w = 0.5 * canal.width;
  GroundingCheck out;
  double worst = 0.0;
  for (const double sx : {0.5 * vessel.length, -0.5 * vessel.length}) {
    for (const double sy : {0.5 * vessel.beam, -0.5 * vessel.beam}) {
      const double yc = s.y + sx * spsi + sy * cpsi;
      if (yc >= half_w && yc - half_w >= worst) {
        worst = yc - half_w;
        out.grounded = true;
        out.side = Side::kStarboard;
      } else if (yc <= -half_w && -half_w - yc >= worst) {
        worst = -half_w - yc;
        out.grounded = true;
        out.side = Side::kPort;
      }
    }
  }
  return out;
}

// Midship clearance check. Beyond the heading validity limit the equivalent
// canal is unbounded (banking is zero there), so there is nothing to guard.
bool domain_ok(const PlanarState& s, const VesselGeometry& vessel,
               const CanalGeometry& canal, double floor) {
  if (std::abs(s.psi) >= kMaxHeading) return true;
  const double sec = 1.0 / std::cos(s.psi);
  const double half_w = 0.5 * canal.width;
  const double half_b = 0.5 * vessel.beam;
  const double ys = (half_w - s.y) * sec - half_b;
  const double yp = (half_w + s.y) * sec - half_b;
  return std::min(ys, yp) >= floor;
}

void format_double(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

const char* outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::kGrounded: return "grounded";
    case Outcome::kCompleted: return "completed";
    case Outcome::kDomainStop: return "domain_stop";
  }
  return "?";
}

const char* side_name(Side side) {
  return side == Side::kPort ? "port" : "starboard";
}

PlanarState step(const PlanarState& state, const CoefficientSet& coeffs,
                 const VesselGeometry& vessel, const CanalGeometry& canal,
                 const SimConfig& config) {
  const ResolvedConfig resolved = resolve(config, coeffs, vessel);
  Dynamics dyn = make_dynamics(config, resolved, coeffs, vessel, canal);
  dyn.z = state.z;
  return unpack(rk4(dyn, pack(state), config.dt), state.z);
}

SimResult run(const SimConfig& config, const CoefficientSet& coeffs,
              const VesselGeometry& vessel, const CanalGeometry& canal) {
  const ResolvedConfig resolved = resolve(config, coeffs, vessel);
  const Dynamics dyn = make_dynamics(config, resolved, coeffs, vessel, canal);

  const auto total_steps =
      static_cast<std::size_t>(std::llround(config.t_max / config.dt));

  SimResult result;
  result.trajectory.reserve(std::min<std::size_t>(total_steps + 1, 1u << 22));

  State6 s = pack(config.initial);
  const double z = config.initial.z;

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const PlanarState state = unpack(s, z);

    TrajectoryPoint point;
    point.t = t;
    point.state = state;
    bool domain_error = false;
    try {
      const BankForce bf = dyn.bank(state);
      point.Y_bank = bf.Y;
      point.N_bank = bf.N;
    } catch (const DomainError&) {
      domain_error = true;
    }
    result.trajectory.push_back(point);

    const GroundingCheck ground = check_grounding(state, vessel, canal);
    if (ground.grounded) {
      result.outcome = Outcome::kGrounded;
      result.side = ground.side;
      result.x_ground = state.x;
      result.t_ground = t;
      return result;
    }
    if (domain_error ||
        !domain_ok(state, vessel, canal, resolved.clearance_floor)) {
      result.outcome = Outcome::kDomainStop;
      result.t_ground = t;
      return result;
    }
    if (k >= total_steps) {
      result.outcome = Outcome::kCompleted;
      return result;
    }
    try {
      s = rk4(dyn, s, config.dt);
    } catch (const DomainError&) {
      result.outcome = Outcome::kDomainStop;
      result.t_ground = t;
      return result;
    }
  }
}

std::vector<SweepPoint> sweep_grounding(std::span<const double> y0s,
                                        const SimConfig& base,
                                        const CoefficientSet& coeffs,
                                        const VesselGeometry& vessel,
                                        const CanalGeometry& canal, int jobs) {
  std::vector<SweepPoint> points(y0s.size());
  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SweepPoint& p = points[i];
      p.y0 = y0s[i];
      try {
        SimConfig config = base;
        config.initial.y = y0s[i];
        const Clearances c0 = clearances(config.initial, vessel, canal);
        p.ys0 = c0.starboard;
        const SimResult result = run(config, coeffs, vessel, canal);
        p.outcome = result.outcome;
        p.side = result.side;
        p.x_ground = result.x_ground;
        p.t_ground = result.t_ground;
      } catch (const Error& e) {
        p.error = e.what();
      }
    }
  };
  if (jobs <= 1 || points.size() < 2) {
    worker(0, points.size());
  } else {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), points.size());
    const std::size_t chunk = (points.size() + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(points.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return points;
}

void write_trajectory_csv(const std::string& path, const SimResult& result) {
  std::ofstream out(path);
  if (!out) throw ValueError("cannot write trajectory file: " + path);
  out << "t,x,y,psi,u,v,r,Ybank,Nbank\n";
  std::string line;
  for (const TrajectoryPoint& p : result.trajectory) {
    line.clear();
    const double fields[] = {p.t,       p.state.x, p.state.y,
                             p.state.psi, p.state.u, p.state.v,
                             p.state.r, p.Y_bank,  p.N_bank};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) line += ',';
      format_double(line, fields[i]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw ValueError("write failed: " + path);
}

void write_sweep_csv(const std::string& path,
                     std::span<const SweepPoint> points) {
  std::ofstream out(path);
  if (!out) throw ValueError("cannot write sweep file: " + path);
  out << "ys0,x_ground,side,t_ground,y0,outcome\n";
  std::string line;
  for (const SweepPoint& p : points) {
    line.clear();
    if (!p.error.empty()) {
      format_double(line, p.ys0);
      line += ",,error,,";
      format_double(line, p.y0);
      line += ",error\n";
      out << line;
      continue;
    }
    const bool grounded = p.outcome == Outcome::kGrounded;
    format_double(line, p.ys0);
    line += ',';
    if (grounded) format_double(line, p.x_ground);
    line += ',';
    line += grounded ? side_name(p.side) : "";
    line += ',';
    if (grounded) format_double(line, p.t_ground);
    line += ',';
    format_double(line, p.y0);
    line += ',';
    line += outcome_name(p.outcome);
    line += '\n';
    out << line;
  }
  if (!out) throw ValueError("write failed: " + path);
}

}  // namespace cbank
