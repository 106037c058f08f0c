#pragma once

#include "nvard/dyad.hpp"

#include <string>
#include <vector>

namespace nvard {

// Number of base regressor columns: intercept, own lag, inverse-flow lag,
// and the four weighted network aggregates.  Total K = 7 + M.
inline constexpr int kBaseColumns = 7;

// Labels for the K = 7 + M design columns.
std::vector<std::string> design_labels(const std::vector<std::string>& covariate_names);

// Resolves column labels to indices; throws naming the first unknown label.
std::vector<int> resolve_columns(const std::vector<std::string>& wanted,
                                 const std::vector<std::string>& labels);

// The (n^2-n) x K regressor matrix for one time point, rows in vecd order.
struct DesignMatrix {
  int t = 0;
  MatrixXd rows;
  std::vector<std::string> column_labels;

  int K() const { return static_cast<int>(rows.cols()); }
};

// Regressor row for pair (i,j) at time t (uses flows at t-1 and X at t):
// (1, y_ij, y_ji, sum_k w_oo y_ik, sum_k w_od y_ki, sum_k w_do y_jk,
//  sum_k w_dd y_kj, X_ijt1..X_ijtM), all lagged flows, sums over k != i,j.
VectorXd build_row(const DyadicPanel& panel, const WeightScheme& weights,
                   const CovariateTensor& X, int i, int j, int t);

// Stacks build_row over all ordered pairs in vecd order.  Valid for
// t = 1..T+1; t = T+1 yields the design used for one-step prediction.
DesignMatrix build_design(const DyadicPanel& panel, const WeightScheme& weights,
                          const CovariateTensor& X, int t);

// A column partition of a design matrix into constant-coefficient columns
// (Z1) and time-varying ones (Z2), with the index maps that reassemble it.
struct DesignSplit {
  std::vector<int> varying_columns;   // sorted, indices into the original K
  std::vector<int> constant_columns;  // complement, sorted
  MatrixXd Z1;                        // columns constant_columns, in order
  MatrixXd Z2;                        // columns varying_columns, in order
  int m() const { return static_cast<int>(varying_columns.size()); }
};

DesignSplit split_design(const DesignMatrix& Z, const std::vector<int>& varying_columns);

// Rebuilds the original matrix from a split (for round-trip checks).
MatrixXd reassemble(const DesignSplit& split);

}  // namespace nvard
