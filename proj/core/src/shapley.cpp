#include "cbank/shapley.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <thread>

#include <nlohmann/json.hpp>

#include "cbank/errors.hpp"

namespace cbank {

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& A, std::uint32_t mask) {
  const int k = std::popcount(mask);
  Eigen::MatrixXd out(A.rows(), k);
  int at = 0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (mask & (1u << j)) out.col(at++) = A.col(j);
  }
  return out;
}

std::vector<bool> select_mask(const std::vector<bool>& nonneg, std::uint32_t mask) {
  std::vector<bool> out;
  for (std::size_t j = 0; j < nonneg.size(); ++j) {
    if (mask & (1u << j)) out.push_back(nonneg[j]);
  }
  return out;
}

// Shapley kernel weight |S|! (n - |S| - 1)! / n! = 1 / (n * C(n-1, |S|)).
std::vector<double> subset_weights(int n) {
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    double binom = 1.0;
    for (int i = 1; i <= s; ++i) {
      binom = binom * static_cast<double>(n - i) / static_cast<double>(i);
    }
    weights[static_cast<std::size_t>(s)] = 1.0 / (static_cast<double>(n) * binom);
  }
  return weights;
}

}  // namespace

const char* block_name(Block block) {
  switch (block) {
    case Block::kX: return "X";
    case Block::kY: return "Y";
    case Block::kN: return "N";
  }
  return "?";
}

double coalition_value(const Eigen::MatrixXd& train_cols,
                       const Eigen::VectorXd& train_target,
                       const Eigen::MatrixXd& val_cols,
                       const Eigen::VectorXd& val_target,
                       const std::vector<bool>& nonneg, std::uint32_t mask) {
  // Exactly-zero columns cannot affect the fit; dropping them keeps v(S)
  // bitwise independent of dummy members, so the dummy axiom holds exactly.
  for (Eigen::Index j = 0; j < train_cols.cols(); ++j) {
    if ((mask & (1u << j)) && train_cols.col(j).norm() == 0.0 &&
        val_cols.col(j).norm() == 0.0) {
      mask &= ~(1u << j);
    }
  }
  if (mask == 0) return 0.0;
  const Eigen::MatrixXd At = select_columns(train_cols, mask);
  const Eigen::MatrixXd Av = select_columns(val_cols, mask);
  const Eigen::VectorXd coef =
      solve_sign_constrained_ls(At, train_target, select_mask(nonneg, mask));
  const auto mval = static_cast<double>(val_target.size());
  const double mse0 = val_target.squaredNorm() / mval;
  const double mse = (val_target - Av * coef).squaredNorm() / mval;
  return mse0 - mse;
}

ShapleyReport shapley_for_matrix(const Eigen::MatrixXd& train_cols,
                                 const Eigen::VectorXd& train_target,
                                 const Eigen::MatrixXd& val_cols,
                                 const Eigen::VectorXd& val_target,
                                 const std::vector<bool>& nonneg,
                                 const std::vector<std::string>& names,
                                 int jobs) {
  const int n = static_cast<int>(train_cols.cols());
  if (n < 1 || n > 20) {
    throw ValueError("exact Shapley enumeration supports 1..20 columns, got " +
                     std::to_string(n));
  }
  if (static_cast<int>(names.size()) != n ||
      static_cast<int>(nonneg.size()) != n || val_cols.cols() != n) {
    throw ValueError("Shapley inputs disagree on the column count");
  }

  const std::uint32_t total = 1u << n;
  std::vector<double> v(total, 0.0);
  const auto eval_range = [&](std::uint32_t begin, std::uint32_t end) {
    for (std::uint32_t mask = begin; mask < end; ++mask) {
      v[mask] = coalition_value(train_cols, train_target, val_cols, val_target,
                                nonneg, mask);
    }
  };
  if (jobs <= 1 || total < 16) {
    eval_range(1, total);
  } else {
    const auto workers = static_cast<std::uint32_t>(jobs);
    std::vector<std::thread> pool;
    const std::uint32_t chunk = (total - 1 + workers - 1) / workers;
    for (std::uint32_t w = 0; w < workers; ++w) {
      const std::uint32_t begin = 1 + w * chunk;
      const std::uint32_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(eval_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  const std::vector<double> weights = subset_weights(n);
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const std::uint32_t bit = 1u << j;
    double sum = 0.0;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      if (mask & bit) continue;
      sum += weights[static_cast<std::size_t>(std::popcount(mask))] *
             (v[mask | bit] - v[mask]);
    }
    phi[static_cast<std::size_t>(j)] = sum;
  }

  double l1 = 0.0;
  for (double p : phi) l1 += std::abs(p);

  ShapleyReport report;
  report.coalition_values = std::move(v);
  report.entries.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ShapleyEntry entry;
    entry.column = names[static_cast<std::size_t>(j)];
    entry.raw = phi[static_cast<std::size_t>(j)];
    entry.normalised = l1 > 0.0 ? entry.raw / l1 : 0.0;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

ShapleyReport shapley_values(Block block, const RegressionProblem& problem,
                             const SplitDataset& split, int jobs) {
  const RegressionProblem train = problem.select(split.train);
  const RegressionProblem val = problem.select(split.validation);

  const Eigen::MatrixXd* t = nullptr;
  const Eigen::MatrixXd* vm = nullptr;
  const Eigen::VectorXd* yt = nullptr;
  const Eigen::VectorXd* yv = nullptr;
  std::vector<bool> mask;
  std::vector<std::string> names;
  switch (block) {
    case Block::kX:
      t = &train.theta_x; vm = &val.theta_x; yt = &train.x; yv = &val.x;
      mask = surge_nonneg_mask();
      names.assign(kSurgeNames.begin(), kSurgeNames.end());
      break;
    case Block::kY:
      t = &train.theta_y; vm = &val.theta_y; yt = &train.y; yv = &val.y;
      mask = sway_nonneg_mask();
      names.assign(kSwayNames.begin(), kSwayNames.end());
      break;
    case Block::kN:
      t = &train.theta_n; vm = &val.theta_n; yt = &train.n; yv = &val.n;
      mask = yaw_nonneg_mask();
      names.assign(kYawNames.begin(), kYawNames.end());
      break;
  }
  ShapleyReport report =
      shapley_for_matrix(*t, *yt, *vm, *yv, mask, names, jobs);
  report.block = block_name(block);
  return report;
}

nlohmann::json shapley_to_json(const ShapleyReport& report) {
  nlohmann::json doc;
  doc["block"] = report.block;
  nlohmann::json rows = nlohmann::json::array();
  for (const ShapleyEntry& e : report.entries) {
    rows.push_back({{"column", e.column},
                    {"shapley", e.raw},
                    {"normalised", e.normalised}});
  }
  doc["values"] = rows;
  doc["coalition_values"] = report.coalition_values;
  return doc;
}

std::string format_table(const ShapleyReport& report) {
  std::size_t width = 6;
  for (const ShapleyEntry& e : report.entries) width = std::max(width, e.column.size());

  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-*s  %12s  %10s\n",
                static_cast<int>(width), report.block.empty() ? "column" : report.block.c_str(),
                "shapley", "normalised");
  out += line;
  out += std::string(width + 26, '-');
  out += '\n';
  for (const ShapleyEntry& e : report.entries) {
    std::snprintf(line, sizeof(line), "%-*s  %12.6g  %10.3f\n",
                  static_cast<int>(width), e.column.c_str(), e.raw, e.normalised);
    out += line;
  }
  return out;
}

}  // namespace cbank
