#pragma once

#include <array>

#include "cbank/coefficients.hpp"
#include "cbank/geometry.hpp"

namespace cbank {

/// Headings at or beyond this magnitude are treated as transverse: the
/// blockage function is defined as zero there and clearances are undefined.
inline constexpr double kMaxHeading = 1.5707953267948966;  // pi/2 - 1e-6

/// Midship lateral clearances from the hull side to each bank [m].
struct Clearances {
  double starboard = 0.0;  ///< y_s
  double port = 0.0;       ///< y_p
};

/// Midship hull clearances in the equivalent aligned canal:
/// y_s = (W/2 - y) sec|psi| - B/2, y_p = (W/2 + y) sec|psi| - B/2.
///
/// Throws DomainError when |psi| >= kMaxHeading or when either clearance is
/// nonpositive (hull touching or beyond a bank).
Clearances clearances(const PlanarState& state, const VesselGeometry& vessel,
                      const CanalGeometry& canal);

/// Dimensionless pressure-asymmetry (blockage) function delta(y, psi).
///
/// Odd in y, zero on the centreline, unbounded as the hull approaches a bank
/// at psi = 0, and decaying to zero as |psi| -> pi/2 (defined as exactly zero
/// for |psi| >= kMaxHeading). Throws DomainError outside the validity region.
double delta(const PlanarState& state, const VesselGeometry& vessel,
             const CanalGeometry& canal);

/// Bank suction force and cushioning moment for water speed u_w:
///   Y = b_bank * 1/2 * C_B * rho * L * (T0 + z) * delta * u_w^2
///   N = -c_bank * 1/2 * C_B * rho * L^2 * (T0 + z) * delta * u_w^2
///
/// With delta > 0 (vessel nearer the starboard bank) and positive
/// coefficients, Y pulls the vessel toward the bank and N pushes the bow
/// away from it. Throws ValueError if u_w < 0 or T0 + z <= 0, DomainError
/// from delta.
BankForce bank_force(const PlanarState& state, double u_w, double b_bank,
                     double c_bank, const VesselGeometry& vessel,
                     const CanalGeometry& canal);

/// One time-indexed motion record: state plus measured accelerations.
struct MotionSample {
  PlanarState state;
  double udot = 0.0;
  double vdot = 0.0;
  double rdot = 0.0;
};

/// Candidate-function rows. Row k of the surge/sway/yaw regression matrix is
/// exactly surge_regressors/sway_regressors/yaw_regressors of record k, so a
/// predicted force is the dot product of a row with the coefficient vector.
/// Signs are baked into the rows (damping and acceleration columns negated,
/// yaw bank column negated).
std::array<double, 3> surge_regressors(const MotionSample& sample);
std::array<double, 7> sway_regressors(const MotionSample& sample,
                                      const VesselGeometry& vessel,
                                      const CanalGeometry& canal,
                                      double uw_offset = 0.0);
std::array<double, 7> yaw_regressors(const MotionSample& sample,
                                     const VesselGeometry& vessel,
                                     const CanalGeometry& canal,
                                     double uw_offset = 0.0);

/// Expected measured surge/sway force and yaw moment (X^, Y^, N^) for one
/// record. uw_offset is an ambient-current correction added to the surge
/// velocity to form the water speed u_w.
std::array<double, 3> predict_measured_forces(const MotionSample& sample,
                                              const CoefficientSet& coeffs,
                                              const VesselGeometry& vessel,
                                              const CanalGeometry& canal,
                                              double uw_offset = 0.0);

/// A geometrically similar scenario produced by froude_scale().
struct ScaledScenario {
  VesselGeometry vessel;
  CanalGeometry canal;
  PlanarState state;
};

/// Froude scaling by factor lambda > 0: lengths (L, B, T0, xG, W, D, x, y, z)
/// scale by lambda, mass by lambda^3, inertia by lambda^5, velocities by
/// sqrt(lambda), yaw rate by 1/sqrt(lambda); psi and all dimensionless
/// quantities are unchanged.
ScaledScenario froude_scale(const VesselGeometry& vessel,
                            const CanalGeometry& canal,
                            const PlanarState& state, double lambda);

}  // namespace cbank
