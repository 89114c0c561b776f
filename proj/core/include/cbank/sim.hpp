#pragma once

#include <span>
#include <string>
#include <vector>

#include "cbank/coefficients.hpp"
#include "cbank/geometry.hpp"

namespace cbank {

/// Free-running 3-DOF transit configuration.
struct SimConfig {
  double dt = 0.01;       ///< fixed integration step [s]
  double t_max = 600.0;   ///< stop time [s]
  double x_in = 0.0;      ///< constant surge input force [N]
  double surge_mass = -1.0;  ///< surge inertia [kg]; < 0 selects the vessel dry mass
  PlanarState initial;
  double clearance_floor = -1.0;  ///< stop threshold [m]; < 0 selects 0.05 * beam
  double uw_offset = 0.0;         ///< ambient-current correction to u_w
  bool coriolis = true;  ///< include Coriolis/centripetal coupling of the mass matrix
};

enum class Outcome { kGrounded, kCompleted, kDomainStop };
enum class Side { kPort, kStarboard };

const char* outcome_name(Outcome outcome);
const char* side_name(Side side);

struct TrajectoryPoint {
  double t = 0.0;
  PlanarState state;
  double Y_bank = 0.0;
  double N_bank = 0.0;
};

struct SimResult {
  std::vector<TrajectoryPoint> trajectory;
  Outcome outcome = Outcome::kCompleted;
  Side side = Side::kStarboard;  ///< grounding side, valid when grounded
  double x_ground = 0.0;         ///< vessel x at grounding [m]
  double t_ground = 0.0;         ///< time of grounding [s]
};

/// One classical RK4 step of
///   M nu_dot + C(nu) nu = F_damp(nu) + F_bank(eta, nu) + (x_in, 0, 0)^T,
///   eta_dot = R(psi) nu,
/// with M = [[surge_mass, 0, 0], [0, b_vdot, b_rdot], [0, c_vdot, c_rdot]]
/// and C(nu) the Kirchhoff Coriolis/centripetal matrix of M (omitted when
/// config.coriolis is false). Banking is zero for |psi| >= kMaxHeading.
/// Throws SingularMassError when M is not invertible, DomainError near the
/// banks.
PlanarState step(const PlanarState& state, const CoefficientSet& coeffs,
                 const VesselGeometry& vessel, const CanalGeometry& canal,
                 const SimConfig& config);

/// Integrates until grounding, domain stop or t_max. Grounding is detected
/// when any corner of the L x B hull rectangle reaches a bank; a domain stop
/// is declared when the midship clearance drops below the clearance floor.
SimResult run(const SimConfig& config, const CoefficientSet& coeffs,
              const VesselGeometry& vessel, const CanalGeometry& canal);

/// One entry of a grounding-distance sweep.
struct SweepPoint {
  double y0 = 0.0;       ///< initial transverse offset [m]
  double ys0 = 0.0;      ///< initial starboard clearance [m]
  Outcome outcome = Outcome::kCompleted;
  Side side = Side::kStarboard;
  double x_ground = 0.0;
  double t_ground = 0.0;
  std::string error;  ///< non-empty when the point failed to run
};

/// Runs one transit per initial transverse offset. Per-point failures are
/// recorded in the result and do not abort the sweep. Points are independent
/// and run in parallel when jobs > 1; output order follows y0s.
std::vector<SweepPoint> sweep_grounding(std::span<const double> y0s,
                                        const SimConfig& base,
                                        const CoefficientSet& coeffs,
                                        const VesselGeometry& vessel,
                                        const CanalGeometry& canal,
                                        int jobs = 1);

/// Trajectory CSV: t,x,y,psi,u,v,r,Ybank,Nbank.
void write_trajectory_csv(const std::string& path, const SimResult& result);

/// Sweep CSV: ys0,x_ground,side,t_ground,y0,outcome.
void write_sweep_csv(const std::string& path,
                     std::span<const SweepPoint> points);

}  // namespace cbank
