#pragma once

namespace cbank {

/// Static hull parameters, model-scale SI units.
struct VesselGeometry {
  double length = 0.0;  ///< length L over the flat side [m]
  double beam = 0.0;    ///< beam B [m]
  double draft = 0.0;   ///< nominal draft T0 [m]
  double cb = 0.0;      ///< block coefficient, in (0, 1]
  double mass = 0.0;    ///< dry mass m [kg]
  double iz = 0.0;      ///< yaw inertia Iz [kg m^2]
  double xg = 0.0;      ///< towing point to centre of gravity offset along body x [m]

  /// Throws ValueError on a violated invariant.
  void validate() const;
};

/// Rectangular canal cross-section. Depth is carried for configuration
/// completeness; the closed-form banking model uses only the width.
struct CanalGeometry {
  double width = 0.0;  ///< canal width W [m]
  double depth = 0.0;  ///< canal depth D [m]
  double rho = 0.0;    ///< water density [kg/m^3]

  void validate() const;
};

/// Planar pose and body velocity of the vessel inside a canal.
///
/// y is the transverse offset from the canal centreline, positive toward the
/// starboard bank. psi is the heading relative to the canal axis. z is the
/// sinkage (positive increases the effective draft); it is an input channel
/// only and is never simulated.
struct PlanarState {
  double x = 0.0;    ///< along-canal position [m]
  double y = 0.0;    ///< transverse offset [m]
  double psi = 0.0;  ///< heading [rad]
  double u = 0.0;    ///< surge velocity [m/s]
  double v = 0.0;    ///< sway velocity [m/s]
  double r = 0.0;    ///< yaw rate [rad/s]
  double z = 0.0;    ///< sinkage [m]
};

/// Banking sway force and yaw moment acting on the vessel.
struct BankForce {
  double Y = 0.0;  ///< suction force, positive toward starboard [N]
  double N = 0.0;  ///< cushioning moment, negative pushes the bow to port [N m]
};

}  // namespace cbank
