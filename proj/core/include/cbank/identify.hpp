#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cbank/coefficients.hpp"
#include "cbank/dataset.hpp"

namespace cbank {

/// Candidate regression matrices and measured targets for one dataset.
struct RegressionProblem {
  Eigen::MatrixXd theta_x;  ///< M x 3
  Eigen::MatrixXd theta_y;  ///< M x 7
  Eigen::MatrixXd theta_n;  ///< M x 7
  Eigen::VectorXd x;        ///< measured surge force
  Eigen::VectorXd y;        ///< measured sway force
  Eigen::VectorXd n;        ///< measured yaw moment

  Eigen::Index rows() const { return theta_x.rows(); }

  /// Row-subset copy (used for train/validation splits).
  RegressionProblem select(std::span<const std::size_t> indices) const;
};

/// Evaluates the candidate functions row-wise for every record.
/// Throws DomainError naming the offending record index when a record lies
/// outside the validity region of the blockage function.
RegressionProblem build_matrices(const CaptiveDataset& dataset,
                                 double uw_offset = 0.0);

/// Which coefficients of each block are constrained to be nonnegative.
std::vector<bool> surge_nonneg_mask();  // a_udot, a_u, a_uu
std::vector<bool> sway_nonneg_mask();   // b_vdot, b_v, b_vv
std::vector<bool> yaw_nonneg_mask();    // c_rdot, c_r, c_rr

/// Sign-constrained least squares: minimises ||A x - b||^2 subject to
/// x_i >= 0 for every i with nonneg[i]. Active-set method in the style of
/// classical nonnegative least squares, generalised to a subset of the
/// coordinates; rank-deficient subproblems take the minimum-norm solution,
/// which pins unidentifiable directions to zero.
Eigen::VectorXd solve_sign_constrained_ls(const Eigen::MatrixXd& A,
                                          const Eigen::VectorXd& b,
                                          const std::vector<bool>& nonneg,
                                          double bound_tol = 1e-10);

/// Solves the coupled identification problem: the X block separately, the Y
/// and N blocks stacked into one system with b_rdot and c_vdot eliminated
/// into a single shared unknown (so the equality holds bitwise). Fills
/// diagnostics (ranks, condition numbers, training MSE, KKT residual,
/// pinned/active coefficient names). Rank deficiency is reported as a
/// warning, not an error.
///
/// Throws ValueError when the problem has fewer rows than unknowns (17).
CoefficientSet solve(const RegressionProblem& problem);

/// Column statistics of one regression block.
struct BlockDiagnostics {
  Eigen::MatrixXd correlation;          ///< Pearson correlation of column pairs
  std::vector<double> singular_values;  ///< descending
  int rank = 0;                         ///< numerical rank
  double condition = 0.0;  ///< sigma_max / sigma_min over the nonzero spectrum
};

/// Correlation/rank/conditioning diagnostics for Theta_X, Theta_Y, Theta_N.
std::array<BlockDiagnostics, 3> diagnostics(const RegressionProblem& problem);

/// Mean squared residual of each block under `coeffs` (typically evaluated
/// on held-out validation rows).
std::array<double, 3> validate(const RegressionProblem& problem,
                               const CoefficientSet& coeffs);

}  // namespace cbank
