#include "cbank/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cbank/errors.hpp"
#include "cbank/hydro.hpp"

namespace cbank {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Names of the stacked sway/yaw unknowns after eliminating b_rdot = c_vdot
// into one shared variable (index 1).
const std::vector<std::string>& stacked_names() {
  static const std::vector<std::string> names = {
      "b_vdot", "b_rdot/c_vdot", "b_v", "b_r",  "b_vv", "b_rr", "b_bank",
      "c_rdot", "c_v",           "c_r", "c_vv", "c_rr", "c_bank"};
  return names;
}

std::vector<bool> stacked_nonneg_mask() {
  return {true, false, true,  false, true, false, false,
          true, false, true,  false, true, false};
}

// Minimum-norm least squares on the passive columns; zeros elsewhere.
Eigen::VectorXd passive_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const std::vector<bool>& passive) {
  const Eigen::Index n = A.cols();
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) k += passive[static_cast<std::size_t>(j)];
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (k == 0) return x;

  Eigen::MatrixXd Ap(A.rows(), k);
  std::vector<Eigen::Index> cols;
  cols.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (passive[static_cast<std::size_t>(j)]) {
      Ap.col(static_cast<Eigen::Index>(cols.size())) = A.col(j);
      cols.push_back(j);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ap, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(static_cast<double>(std::max(A.rows(), k)) * kEps);
  const Eigen::VectorXd z = svd.solve(b);
  for (std::size_t i = 0; i < cols.size(); ++i) x[cols[i]] = z[static_cast<Eigen::Index>(i)];
  return x;
}

struct RankInfo {
  std::vector<double> singular_values;
  int rank = 0;
  double condition = 0.0;
  std::vector<int> null_columns;  // column index attributed to each null direction
};

RankInfo rank_info(const Eigen::MatrixXd& A) {
  RankInfo info;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  info.singular_values.assign(sv.data(), sv.data() + sv.size());
  if (sv.size() == 0 || sv(0) == 0.0) return info;

  const double threshold =
      static_cast<double>(std::max(A.rows(), A.cols())) * kEps * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++info.rank;
  }
  if (info.rank > 0) info.condition = sv(0) / sv(info.rank - 1);
  // Attribute each numerically null direction to the column that dominates
  // the corresponding right singular vector.
  const Eigen::MatrixXd& V = svd.matrixV();
  for (Eigen::Index i = info.rank; i < sv.size(); ++i) {
    Eigen::Index which = 0;
    V.col(i).cwiseAbs().maxCoeff(&which);
    info.null_columns.push_back(static_cast<int>(which));
  }
  return info;
}

struct SystemSolution {
  Eigen::VectorXd x;
  double kkt_relative = 0.0;
  std::vector<int> active;  // bounded coordinates held at zero by the data
};

// Relative KKT residual and active-bound detection for min ||Ax-b||^2,
// x_i >= 0 on the bounded set. g = A^T (b - Ax); interior coordinates need
// |g| ~ 0, bounded coordinates at zero need g <= 0.
SystemSolution finish_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const std::vector<bool>& nonneg,
                             Eigen::VectorXd x) {
  SystemSolution out;
  const Eigen::VectorXd g = A.transpose() * (b - A * x);
  const double scale = std::max(1.0, (A.transpose() * b).cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const bool at_bound = nonneg[static_cast<std::size_t>(i)] && x[i] <= 0.0;
    const double violation = at_bound ? std::max(0.0, g[i]) : std::abs(g[i]);
    worst = std::max(worst, violation);
    if (at_bound && g[i] < -1e-8 * scale) {
      out.active.push_back(static_cast<int>(i));
    }
  }
  out.kkt_relative = worst / scale;
  out.x = std::move(x);
  return out;
}

}  // namespace

RegressionProblem RegressionProblem::select(
    std::span<const std::size_t> indices) const {
  RegressionProblem out;
  const auto m = static_cast<Eigen::Index>(indices.size());
  out.theta_x.resize(m, theta_x.cols());
  out.theta_y.resize(m, theta_y.cols());
  out.theta_n.resize(m, theta_n.cols());
  out.x.resize(m);
  out.y.resize(m);
  out.n.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(i)]);
    out.theta_x.row(i) = theta_x.row(row);
    out.theta_y.row(i) = theta_y.row(row);
    out.theta_n.row(i) = theta_n.row(row);
    out.x(i) = x(row);
    out.y(i) = y(row);
    out.n(i) = n(row);
  }
  return out;
}

RegressionProblem build_matrices(const CaptiveDataset& dataset,
                                 double uw_offset) {
  const auto m = static_cast<Eigen::Index>(dataset.records.size());
  RegressionProblem p;
  p.theta_x.resize(m, 3);
  p.theta_y.resize(m, 7);
  p.theta_n.resize(m, 7);
  p.x.resize(m);
  p.y.resize(m);
  p.n.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const CaptiveRecord& rec = dataset.records[static_cast<std::size_t>(i)];
    try {
      const MotionSample sample = rec.motion();
      const auto rx = surge_regressors(sample);
      const auto ry = sway_regressors(sample, dataset.vessel, dataset.canal, uw_offset);
      const auto rn = yaw_regressors(sample, dataset.vessel, dataset.canal, uw_offset);
      for (Eigen::Index j = 0; j < 3; ++j) p.theta_x(i, j) = rx[static_cast<std::size_t>(j)];
      for (Eigen::Index j = 0; j < 7; ++j) p.theta_y(i, j) = ry[static_cast<std::size_t>(j)];
      for (Eigen::Index j = 0; j < 7; ++j) p.theta_n(i, j) = rn[static_cast<std::size_t>(j)];
    } catch (const DomainError& e) {
      throw DomainError("record " + std::to_string(i) + ": " + e.what());
    }
    p.x(i) = rec.X;
    p.y(i) = rec.Y;
    p.n(i) = rec.N;
  }
  return p;
}

std::vector<bool> surge_nonneg_mask() { return {true, true, true}; }
std::vector<bool> sway_nonneg_mask() {
  return {true, false, true, false, true, false, false};
}
std::vector<bool> yaw_nonneg_mask() {
  return {false, true, false, true, false, true, false};
}

Eigen::VectorXd solve_sign_constrained_ls(const Eigen::MatrixXd& A,
                                          const Eigen::VectorXd& b,
                                          const std::vector<bool>& nonneg,
                                          double bound_tol) {
  const Eigen::Index n = A.cols();
  if (static_cast<Eigen::Index>(nonneg.size()) != n) {
    throw ValueError("nonneg mask size does not match column count");
  }

  // Column equilibration; zero columns keep scale 1 and simply stay zero.
  Eigen::VectorXd scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = A.col(j).norm();
    scale[j] = norm > 0.0 ? norm : 1.0;
  }
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();

  std::vector<bool> passive(static_cast<std::size_t>(n));
  std::vector<bool> excluded(static_cast<std::size_t>(n), false);
  bool any_free = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    passive[static_cast<std::size_t>(j)] = !nonneg[static_cast<std::size_t>(j)];
    any_free = any_free || passive[static_cast<std::size_t>(j)];
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (any_free) x = passive_ls(As, b, passive);

  const double dual_tol =
      bound_tol * std::max(1.0, (As.transpose() * b).cwiseAbs().maxCoeff());
  const int max_outer = 50 * static_cast<int>(n) + 50;

  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = As.transpose() * (b - As * x);
    Eigen::Index t = -1;
    double best = dual_tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!nonneg[ju] || passive[ju] || excluded[ju]) continue;
      if (w[j] > best) {
        best = w[j];
        t = j;
      }
    }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;

    bool removed_t = false;
    for (int inner = 0; inner < max_outer; ++inner) {
      const Eigen::VectorXd z = passive_ls(As, b, passive);
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (!passive[ju] || !nonneg[ju]) continue;
        if (z[j] <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x[j] / (x[j] - z[j]));
        }
      }
      if (feasible) {
        x = z;
        break;
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (passive[ju] && nonneg[ju] && x[j] <= bound_tol) {
          passive[ju] = false;
          x[j] = 0.0;
          if (j == t) removed_t = true;
        }
      }
    }
    // A coordinate that re-binds immediately cannot make progress; skip it.
    if (removed_t) excluded[static_cast<std::size_t>(t)] = true;
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    if (nonneg[static_cast<std::size_t>(j)] && x[j] < 0.0) x[j] = 0.0;
  }
  return scale.cwiseInverse().asDiagonal() * x;
}

CoefficientSet solve(const RegressionProblem& problem) {
  const Eigen::Index m = problem.rows();
  if (m < 17) {
    throw ValueError("need at least 17 rows to identify 17 coefficients, got " +
                     std::to_string(m));
  }

  // Surge block.
  const Eigen::VectorXd a =
      solve_sign_constrained_ls(problem.theta_x, problem.x, surge_nonneg_mask());

  // Sway and yaw stacked, with one shared unknown for b_rdot = c_vdot.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 13);
  A.block(0, 0, m, 1) = problem.theta_y.col(kBvdot);
  A.block(0, 1, m, 1) = problem.theta_y.col(kBrdot);
  A.block(m, 1, m, 1) = problem.theta_n.col(kCvdot);
  for (int j = 2; j < 7; ++j) A.block(0, j, m, 1) = problem.theta_y.col(j);
  A.block(m, 7, m, 1) = problem.theta_n.col(kCrdot);
  for (int j = 2; j < 7; ++j) A.block(m, 6 + j, m, 1) = problem.theta_n.col(j);
  Eigen::VectorXd rhs(2 * m);
  rhs.head(m) = problem.y;
  rhs.tail(m) = problem.n;

  const Eigen::VectorXd z = solve_sign_constrained_ls(A, rhs, stacked_nonneg_mask());

  CoefficientSet coeffs;
  for (int i = 0; i < 3; ++i) coeffs.a[static_cast<std::size_t>(i)] = a[i];
  coeffs.b = {z[0], z[1], z[2], z[3], z[4], z[5], z[6]};
  coeffs.c = {z[1], z[7], z[8], z[9], z[10], z[11], z[12]};

  SolveDiagnostics& d = coeffs.diagnostics;

  // Per-block rank and conditioning.
  const Eigen::MatrixXd* blocks[3] = {&problem.theta_x, &problem.theta_y,
                                      &problem.theta_n};
  const char* block_labels[3] = {"Theta_X", "Theta_Y", "Theta_N"};
  for (int k = 0; k < 3; ++k) {
    const RankInfo info = rank_info(*blocks[k]);
    d.rank[static_cast<std::size_t>(k)] = info.rank;
    d.condition[static_cast<std::size_t>(k)] = info.condition;
    if (info.rank < blocks[k]->cols()) {
      d.warnings.push_back(std::string(block_labels[k]) + " rank-deficient (rank " +
                           std::to_string(info.rank) + " of " +
                           std::to_string(blocks[k]->cols()) + ")");
    }
  }

  // Unidentifiable directions of the systems actually solved.
  const RankInfo info_x = rank_info(problem.theta_x);
  for (int j : info_x.null_columns) {
    d.pinned.push_back(kSurgeNames[static_cast<std::size_t>(j)]);
  }
  const RankInfo info_yn = rank_info(A);
  for (int j : info_yn.null_columns) {
    d.pinned.push_back(stacked_names()[static_cast<std::size_t>(j)]);
  }
  for (const std::string& name : d.pinned) {
    d.warnings.push_back(name + " unidentifiable, pinned to 0");
  }

  // KKT residual and active sign constraints.
  const SystemSolution sx =
      finish_system(problem.theta_x, problem.x, surge_nonneg_mask(), a);
  const SystemSolution syn = finish_system(A, rhs, stacked_nonneg_mask(), z);
  d.kkt_residual = std::max(sx.kkt_relative, syn.kkt_relative);
  for (int i : sx.active) d.active_bounds.push_back(kSurgeNames[static_cast<std::size_t>(i)]);
  for (int i : syn.active) d.active_bounds.push_back(stacked_names()[static_cast<std::size_t>(i)]);

  const auto mse = [m](const Eigen::VectorXd& resid) {
    return resid.squaredNorm() / static_cast<double>(m);
  };
  d.train_mse[0] = mse(problem.x - problem.theta_x * a);
  d.train_mse[1] = mse(problem.y - problem.theta_y *
                                       Eigen::Map<const Eigen::VectorXd>(coeffs.b.data(), 7));
  d.train_mse[2] = mse(problem.n - problem.theta_n *
                                       Eigen::Map<const Eigen::VectorXd>(coeffs.c.data(), 7));

  if (!added_mass_positive_definite(coeffs)) {
    d.warnings.push_back(
        "added-mass block [[b_vdot, b_rdot], [c_vdot, c_rdot]] is not positive definite");
  }
  return coeffs;
}

std::array<BlockDiagnostics, 3> diagnostics(const RegressionProblem& problem) {
  if (problem.rows() < 2) throw ValueError("diagnostics need at least 2 rows");
  const Eigen::MatrixXd* blocks[3] = {&problem.theta_x, &problem.theta_y,
                                      &problem.theta_n};
  std::array<BlockDiagnostics, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Eigen::MatrixXd& A = *blocks[k];
    BlockDiagnostics& bd = out[static_cast<std::size_t>(k)];

    const RankInfo info = rank_info(A);
    bd.rank = info.rank;
    bd.condition = info.condition;
    bd.singular_values = info.singular_values;

    const Eigen::Index n = A.cols();
    const auto mrows = static_cast<double>(A.rows());
    Eigen::MatrixXd centered = A.rowwise() - A.colwise().mean();
    Eigen::VectorXd sd(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      sd[j] = std::sqrt(centered.col(j).squaredNorm() / mrows);
    }
    bd.correlation.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) {
          bd.correlation(i, j) = 1.0;
        } else if (sd[i] == 0.0 || sd[j] == 0.0) {
          bd.correlation(i, j) = 0.0;
        } else {
          bd.correlation(i, j) =
              centered.col(i).dot(centered.col(j)) / (mrows * sd[i] * sd[j]);
        }
      }
    }
  }
  return out;
}

std::array<double, 3> validate(const RegressionProblem& problem,
                               const CoefficientSet& coeffs) {
  const auto m = static_cast<double>(problem.rows());
  const Eigen::Map<const Eigen::Vector3d> a(coeffs.a.data());
  const Eigen::Map<const Eigen::VectorXd> b(coeffs.b.data(), 7);
  const Eigen::Map<const Eigen::VectorXd> c(coeffs.c.data(), 7);
  return {(problem.x - problem.theta_x * a).squaredNorm() / m,
          (problem.y - problem.theta_y * b).squaredNorm() / m,
          (problem.n - problem.theta_n * c).squaredNorm() / m};
}

}  // namespace cbank
