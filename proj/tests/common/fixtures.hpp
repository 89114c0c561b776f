#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "cbank/coefficients.hpp"
#include "cbank/geometry.hpp"

namespace cbank::testing {

// 1:89.11-scale DTC container-ship model in a 7 m test canal; matches
// configs/dtc_model.cfg.
inline VesselGeometry dtc_vessel() {
  VesselGeometry v;
  v.length = 3.984;
  v.beam = 0.572;
  v.draft = 0.163;
  v.cb = 0.661;
  v.mass = 245.8;
  v.iz = 219.2;
  v.xg = -0.107;
  return v;
}

inline CanalGeometry canal7() {
  CanalGeometry c;
  c.width = 7.0;
  c.depth = 0.22;
  c.rho = 1000.0;
  return c;
}

// Reference coefficient set identified for the DTC model; matches
// configs/dtc_coeffs.json.
inline CoefficientSet reference_coefficients() {
  CoefficientSet k;
  k.a = {0.0, 0.0, 12.6};
  k.b = {733.0, -56.1, 100.0, 118.0, 3298.0, -161.0, 1.07};
  k.c = {-56.1, 712.0, 414.0, 84.9, 589.0, 3346.0, 0.13};
  return k;
}

inline std::filesystem::path write_temp(const std::string& name,
                                        const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("cbank_" + name);
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace cbank::testing
