#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbank/coefficients.hpp"
#include "cbank/geometry.hpp"
#include "cbank/hydro.hpp"

namespace cbank {

/// One captive-test sample: time, pose, velocities, accelerations, sinkage
/// and the measured surge/sway force and yaw moment.
struct CaptiveRecord {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double u = 0.0;
  double v = 0.0;
  double r = 0.0;
  double udot = 0.0;
  double vdot = 0.0;
  double rdot = 0.0;
  double z = 0.0;
  double X = 0.0;  ///< measured surge force [N]
  double Y = 0.0;  ///< measured sway force [N]
  double N = 0.0;  ///< measured yaw moment [N m]
  char label = 'A';  ///< captive test tag, one of {A, B, C}

  MotionSample motion() const {
    return MotionSample{PlanarState{x, y, psi, u, v, r, z}, udot, vdot, rdot};
  }
};

/// An ordered captive-test time series together with the geometry it was
/// recorded against. Time is monotone within each test label.
struct CaptiveDataset {
  std::vector<CaptiveRecord> records;
  VesselGeometry vessel;
  CanalGeometry canal;

  std::size_t size() const { return records.size(); }
};

/// CSV schema: header `t,x,y,psi,u,v,r,udot,vdot,rdot,z,X,Y,N` plus an
/// optional trailing `label` column (defaults to A when absent). Columns are
/// matched by name. Rows with a non-finite value are rejected.
///
/// Throws SchemaError (missing/unknown column) or ParseError (malformed row,
/// with its line number).
CaptiveDataset load_csv(const std::string& path, const VesselGeometry& vessel,
                        const CanalGeometry& canal);

/// Writes the full schema including the label column. Values round-trip
/// exactly (shortest representation).
void write_csv(const std::string& path, const CaptiveDataset& dataset);

/// Appends `other`'s records to `into`. Both datasets must refer to the same
/// vessel and canal geometry.
void append(CaptiveDataset& into, const CaptiveDataset& other);

/// Train/validation partition of a dataset by record index.
struct SplitDataset {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::uint64_t seed = 0;
};

/// Seeded random split. |train| = round(fraction * M) with ties toward
/// train; the shuffle is uniform over permutations and identical across
/// platforms for a given seed. Temporal order is deliberately ignored.
SplitDataset split(const CaptiveDataset& dataset, double fraction,
                   std::uint64_t seed);

/// Captive-test trajectory shapes supported by the synthetic generator.
enum class ScenarioKind {
  kHarmonicYaw,   ///< psi(t) = A sin(2 pi t / T), y = 0 (tests A, B)
  kHarmonicSway,  ///< y(t) = A sin(2 pi t / T), psi = 0 (test C)
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::kHarmonicSway;
  double amplitude = 0.0;  ///< [rad] for yaw, [m] for sway
  double period = 0.0;     ///< [s]
};

struct NoiseStd {
  double X = 0.0;
  double Y = 0.0;
  double N = 0.0;
};

/// Generates a captive test with analytically prescribed kinematics and
/// forces computed from `truth` (plus optional zero-mean Gaussian noise).
///
/// The surge velocity is constant at u0 in both scenarios, so udot == 0 and
/// the surge-acceleration column of any dataset built this way is zero. In
/// harmonic yaw the model is held on the centreline (y == 0), which makes
/// v = -u0 tan(psi); velocities and accelerations are exact derivatives of
/// the prescribed trajectory. Sinkage z is zero throughout.
///
/// Throws DomainError if the trajectory exits the validity region and
/// ValueError on nonsensical parameters (dt <= 0, period <= 0, ...).
CaptiveDataset synthesize(const VesselGeometry& vessel,
                          const CanalGeometry& canal,
                          const CoefficientSet& truth, const Scenario& scenario,
                          double u0, double duration, double dt,
                          const NoiseStd& noise = {}, std::uint64_t seed = 0,
                          char label = 'A');

}  // namespace cbank
