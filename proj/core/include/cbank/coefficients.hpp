#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace cbank {

/// Index of each surge coefficient inside CoefficientSet::a.
enum SurgeCoef : std::size_t { kAudot = 0, kAu = 1, kAuu = 2 };

/// Index of each sway coefficient inside CoefficientSet::b.
enum SwayCoef : std::size_t {
  kBvdot = 0,
  kBrdot = 1,
  kBv = 2,
  kBr = 3,
  kBvv = 4,
  kBrr = 5,
  kBbank = 6
};

/// Index of each yaw coefficient inside CoefficientSet::c.
enum YawCoef : std::size_t {
  kCvdot = 0,
  kCrdot = 1,
  kCv = 2,
  kCr = 3,
  kCvv = 4,
  kCrr = 5,
  kCbank = 6
};

inline constexpr std::array<const char*, 3> kSurgeNames{"a_udot", "a_u", "a_uu"};
inline constexpr std::array<const char*, 7> kSwayNames{
    "b_vdot", "b_rdot", "b_v", "b_r", "b_vv", "b_rr", "b_bank"};
inline constexpr std::array<const char*, 7> kYawNames{
    "c_vdot", "c_rdot", "c_v", "c_r", "c_vv", "c_rr", "c_bank"};

/// Solver metadata attached to an identified coefficient set.
struct SolveDiagnostics {
  std::array<int, 3> rank{0, 0, 0};                  ///< numerical rank of Theta_X/Y/N
  std::array<double, 3> condition{0.0, 0.0, 0.0};    ///< per-block condition number
  std::array<double, 3> train_mse{0.0, 0.0, 0.0};    ///< per-block training MSE
  std::array<double, 3> validation_mse{-1.0, -1.0, -1.0};  ///< filled by validate(); <0 = unset
  double kkt_residual = 0.0;            ///< relative KKT violation at the solution
  std::vector<std::string> pinned;      ///< unidentifiable coefficients pinned to zero
  std::vector<std::string> active_bounds;  ///< sign constraints active at the solution
  std::vector<std::string> warnings;
};

/// The regressor vectors of the three force models.
///
/// a = (a_udot, a_u, a_uu), b = (b_vdot, b_rdot, b_v, b_r, b_vv, b_rr, b_bank)
/// and c = (c_vdot, c_rdot, c_v, c_r, c_vv, c_rr, c_bank). A set produced by
/// the identification solver satisfies b_rdot == c_vdot bitwise and the sign
/// constraints checked by satisfies_constraints().
struct CoefficientSet {
  std::array<double, 3> a{};
  std::array<double, 7> b{};
  std::array<double, 7> c{};
  SolveDiagnostics diagnostics;

  double b_bank() const { return b[kBbank]; }
  double c_bank() const { return c[kCbank]; }

  /// True when b_rdot == c_vdot and every nonnegativity constraint holds.
  bool satisfies_constraints() const;
};

/// True when the sway/yaw added-mass block [[b_vdot, b_rdot], [c_vdot, c_rdot]]
/// is symmetric positive definite.
bool added_mass_positive_definite(const CoefficientSet& coeffs);

/// Serializes a coefficient set (with its diagnostics block) to JSON.
/// `provenance` is merged into the document under "provenance".
nlohmann::json coefficients_to_json(const CoefficientSet& coeffs,
                                    const nlohmann::json& provenance);
nlohmann::json coefficients_to_json(const CoefficientSet& coeffs);

/// Parses a coefficient set from a JSON document produced by
/// coefficients_to_json(). Throws SchemaError on missing fields.
CoefficientSet coefficients_from_json(const nlohmann::json& doc);

/// File-based convenience wrappers. save writes atomically (tmp + rename).
void save_coefficients(const std::string& path, const CoefficientSet& coeffs,
                       const nlohmann::json& provenance);
CoefficientSet load_coefficients(const std::string& path);

}  // namespace cbank
