#include "cbank/hydro.hpp"

#include <cmath>
#include <string>

#include "cbank/errors.hpp"

namespace cbank {

namespace {

double sec_abs(double psi) { return 1.0 / std::cos(psi); }

}  // namespace

Clearances clearances(const PlanarState& state, const VesselGeometry& vessel,
                      const CanalGeometry& canal) {
  if (!(std::abs(state.psi) < kMaxHeading)) {
    throw DomainError("clearances undefined for |psi| >= pi/2 (psi = " +
                      std::to_string(state.psi) + ")");
  }
  const double sec = sec_abs(state.psi);
  const double half_w = 0.5 * canal.width;
  const double half_b = 0.5 * vessel.beam;
  Clearances c;
  c.starboard = (half_w - state.y) * sec - half_b;
  c.port = (half_w + state.y) * sec - half_b;
  if (!(c.starboard > 0.0) || !(c.port > 0.0)) {
    throw DomainError("hull touching or beyond a bank (y_s = " +
                      std::to_string(c.starboard) + ", y_p = " +
                      std::to_string(c.port) + ")");
  }
  return c;
}

double delta(const PlanarState& state, const VesselGeometry& vessel,
             const CanalGeometry& canal) {
  if (std::abs(state.psi) >= kMaxHeading) return 0.0;
  const Clearances c = clearances(state, vessel, canal);
  const double half_b = 0.5 * vessel.beam;
  const double num_s = c.starboard + half_b;  // (W/2 - y) sec|psi|
  const double num_p = c.port + half_b;       // (W/2 + y) sec|psi|
  const double rs = num_s / c.starboard;
  const double rp = num_p / c.port;
  return rs * rs - rp * rp;
}

BankForce bank_force(const PlanarState& state, double u_w, double b_bank,
                     double c_bank, const VesselGeometry& vessel,
                     const CanalGeometry& canal) {
  if (!(u_w >= 0.0)) {
    throw ValueError("water speed u_w must be >= 0 (got " + std::to_string(u_w) + ")");
  }
  const double wetted = vessel.draft + state.z;
  if (!(wetted > 0.0)) {
    throw ValueError("T0 + z must be > 0 (got " + std::to_string(wetted) + ")");
  }
  const double d = delta(state, vessel, canal);
  const double common =
      0.5 * vessel.cb * canal.rho * vessel.length * wetted * d * u_w * u_w;
  BankForce f;
  f.Y = b_bank * common;
  f.N = -c_bank * common * vessel.length;
  return f;
}

std::array<double, 3> surge_regressors(const MotionSample& sample) {
  const double u = sample.state.u;
  return {-sample.udot, -u, -std::abs(u) * u};
}

namespace {

// Sway bank column: 1/2 C_B rho L (T0 + z) delta u_w^2. The yaw column is
// this times -L.
double bank_column(const MotionSample& sample, const VesselGeometry& vessel,
                   const CanalGeometry& canal, double uw_offset) {
  const double u_w = sample.state.u + uw_offset;
  const double wetted = vessel.draft + sample.state.z;
  const double d = delta(sample.state, vessel, canal);
  return 0.5 * vessel.cb * canal.rho * vessel.length * wetted * d * u_w * u_w;
}

}  // namespace

std::array<double, 7> sway_regressors(const MotionSample& sample,
                                      const VesselGeometry& vessel,
                                      const CanalGeometry& canal,
                                      double uw_offset) {
  const double v = sample.state.v;
  const double r = sample.state.r;
  return {-sample.vdot,        -sample.rdot,        -v, -r,
          -std::abs(v) * v,    -std::abs(r) * r,
          bank_column(sample, vessel, canal, uw_offset)};
}

std::array<double, 7> yaw_regressors(const MotionSample& sample,
                                     const VesselGeometry& vessel,
                                     const CanalGeometry& canal,
                                     double uw_offset) {
  std::array<double, 7> row = sway_regressors(sample, vessel, canal, uw_offset);
  row[kCbank] *= -vessel.length;
  return row;
}

std::array<double, 3> predict_measured_forces(const MotionSample& sample,
                                              const CoefficientSet& coeffs,
                                              const VesselGeometry& vessel,
                                              const CanalGeometry& canal,
                                              double uw_offset) {
  const auto rx = surge_regressors(sample);
  const auto ry = sway_regressors(sample, vessel, canal, uw_offset);
  const auto rn = yaw_regressors(sample, vessel, canal, uw_offset);
  std::array<double, 3> forces{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < 3; ++i) forces[0] += rx[i] * coeffs.a[i];
  for (std::size_t i = 0; i < 7; ++i) forces[1] += ry[i] * coeffs.b[i];
  for (std::size_t i = 0; i < 7; ++i) forces[2] += rn[i] * coeffs.c[i];
  return forces;
}

ScaledScenario froude_scale(const VesselGeometry& vessel,
                            const CanalGeometry& canal,
                            const PlanarState& state, double lambda) {
  if (!(lambda > 0.0)) {
    throw ValueError("scale factor lambda must be > 0");
  }
  const double sq = std::sqrt(lambda);
  ScaledScenario s{vessel, canal, state};
  s.vessel.length *= lambda;
  s.vessel.beam *= lambda;
  s.vessel.draft *= lambda;
  s.vessel.xg *= lambda;
  s.vessel.mass *= lambda * lambda * lambda;
  s.vessel.iz *= lambda * lambda * lambda * lambda * lambda;
  s.canal.width *= lambda;
  s.canal.depth *= lambda;
  s.state.x *= lambda;
  s.state.y *= lambda;
  s.state.z *= lambda;
  s.state.u *= sq;
  s.state.v *= sq;
  s.state.r /= sq;
  return s;
}

}  // namespace cbank
