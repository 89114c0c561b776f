#pragma once

#include <iosfwd>
#include <string>

#include "cbank/geometry.hpp"

namespace cbank {

/// Vessel and canal geometry as read from a model configuration file.
struct ModelConfig {
  VesselGeometry vessel;
  CanalGeometry canal;
};

/// Reads a plain key-value configuration file.
///
/// Format: one `key = value` pair per line, `#` starts a comment. The
/// documented keys are L, B, T0, CB, m, Iz, xG (vessel) and W, D, rho
/// (canal); all are required, all values are model-scale SI.
///
/// Throws SchemaError on a missing or unknown key, ParseError on a
/// malformed line, and ValueError when a geometry invariant is violated.
ModelConfig load_model_config(const std::string& path);

/// Same, reading from an open stream; `name` is used in error messages.
ModelConfig read_model_config(std::istream& in, const std::string& name);

}  // namespace cbank
