#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "cbank/identify.hpp"

namespace cbank {

enum class Block { kX, kY, kN };

const char* block_name(Block block);

struct ShapleyEntry {
  std::string column;
  double raw = 0.0;         ///< Shapley value in MSE units
  double normalised = 0.0;  ///< raw / sum of |raw| over the block
};

/// Exact Shapley attribution of one regression block's columns.
struct ShapleyReport {
  std::string block;
  std::vector<ShapleyEntry> entries;
  /// v(S) for every coalition S, indexed by column bitmask; v(0) == 0.
  std::vector<double> coalition_values;
};

/// Value of a column coalition: v(S) = MSE_val(zero predictor) - MSE_val(S),
/// where the S-restricted model is refit on the training rows with the same
/// sign-constraint structure and scored on the validation rows. v of the
/// empty coalition is zero by construction.
double coalition_value(const Eigen::MatrixXd& train_cols,
                       const Eigen::VectorXd& train_target,
                       const Eigen::MatrixXd& val_cols,
                       const Eigen::VectorXd& val_target,
                       const std::vector<bool>& nonneg, std::uint32_t mask);

/// Exact Shapley values by full coalition enumeration (2^n refits, n <= 20).
/// Deterministic regardless of `jobs`; coalition refits are independent and
/// run in parallel when jobs > 1.
ShapleyReport shapley_for_matrix(const Eigen::MatrixXd& train_cols,
                                 const Eigen::VectorXd& train_target,
                                 const Eigen::MatrixXd& val_cols,
                                 const Eigen::VectorXd& val_target,
                                 const std::vector<bool>& nonneg,
                                 const std::vector<std::string>& names,
                                 int jobs = 1);

/// Shapley attribution of one block of an identification problem under a
/// train/validation split. The b_rdot = c_vdot coupling is dropped during
/// coalition refits, so blocks are analysed independently.
ShapleyReport shapley_values(Block block, const RegressionProblem& problem,
                             const SplitDataset& split, int jobs = 1);

nlohmann::json shapley_to_json(const ShapleyReport& report);

/// Aligned plain-text table: one row per column, raw and normalised values.
std::string format_table(const ShapleyReport& report);

}  // namespace cbank
