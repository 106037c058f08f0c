#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace nvard {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Position of off-diagonal element (i,j), 0-based, in the column-major
// diagonal-excluding vectorization: (a_21, a_31, ..., a_n1, a_12, a_32, ...).
inline int vecd_index(int i, int j, int n) {
  return j * (n - 1) + i - (i > j ? 1 : 0);
}

// Inverse map: position p -> (i,j), 0-based.
std::pair<int, int> vecd_pair(int p, int n);

// Column-major vectorization of a square matrix excluding the diagonal.
// The diagonal entries are never read.
VectorXd vecd(const MatrixXd& a);

// Inverse of vecd; the diagonal of the result is set to NaN (masked).
MatrixXd unvecd(const VectorXd& v, int n);

// A directed n x n flow panel over time points t = 0..T.  t = 0 is the
// initial observation; responses are the flows at t = 1..T.  Diagonal
// entries are masked and any access to (i,i) throws.
class DyadicPanel {
 public:
  DyadicPanel(std::vector<std::string> time_labels, std::vector<MatrixXd> flows,
              bool transformed = false);

  int n() const { return n_; }
  int T() const { return static_cast<int>(flows_.size()) - 1; }
  bool transformed() const { return transformed_; }
  const std::vector<std::string>& time_labels() const { return time_labels_; }

  // Checked access to a single flow; throws on i == j or out of range.
  double flow(int i, int j, int t) const;

  // Flow matrix at time t (diagonal holds NaN sentinels).
  const MatrixXd& matrix(int t) const;

  // vecd of the flow matrix at time t.
  VectorXd response(int t) const;

 private:
  int n_;
  std::vector<std::string> time_labels_;
  std::vector<MatrixXd> flows_;
  bool transformed_;
};

// Dyadic covariates X_ijt in R^M for t = 1..max_t, stored as one
// (n^2-n) x M matrix per time point with rows in vecd pair order.
class CovariateTensor {
 public:
  CovariateTensor(int n, std::vector<std::string> names,
                  std::vector<MatrixXd> slices);

  static CovariateTensor empty(int n, int max_t);

  int n() const { return n_; }
  int M() const { return static_cast<int>(names_.size()); }
  int max_t() const { return static_cast<int>(slices_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  // Covariate block at time t, t in 1..max_t.
  const MatrixXd& slice(int t) const;

  double value(int i, int j, int t, int covariate) const;

 private:
  int n_;
  std::vector<std::string> names_;
  std::vector<MatrixXd> slices_;  // slices_[t-1]
};

// The four aggregation weight families: w(oo), w(od), w(do), w(dd).
enum class WeightFamily { origin_origin, origin_dest, dest_origin, dest_dest };

const char* to_string(WeightFamily f);
WeightFamily weight_family_from_string(const std::string& s);

inline constexpr std::array<WeightFamily, 4> kWeightFamilies = {
    WeightFamily::origin_origin, WeightFamily::origin_dest,
    WeightFamily::dest_origin, WeightFamily::dest_dest};

struct WeightViolation {
  WeightFamily family;
  int i, j;
  double value;          // offending sum or weight
  std::string message;
};

// Normalized aggregation weights: for every ordered pair (i,j) and every
// family, the weights over k not in {i,j} sum to 1 and are nonnegative.
// Entries at k = i and k = j must be zero.  Construction checks shapes
// only; numeric constraints are reported by validate_weights.
class WeightScheme {
 public:
  // One (n^2-n) x n matrix per family; rows in vecd pair order, column k.
  WeightScheme(int n, std::array<MatrixXd, 4> families);

  int n() const { return n_; }
  double weight(WeightFamily f, int i, int j, int k) const;
  const MatrixXd& family(WeightFamily f) const;
  MatrixXd& mutable_family(WeightFamily f);

 private:
  int n_;
  std::array<MatrixXd, 4> families_;
};

// Equal weights 1/(n-2) over the n-2 eligible third nodes.  Requires n >= 3.
WeightScheme equal_weights(int n);

// Row-sum tolerance for weight normalization checks.
inline constexpr double kWeightSumTolerance = 1e-12;

// Returns all normalization/nonnegativity violations; empty iff valid.
std::vector<WeightViolation> validate_weights(const WeightScheme& scheme);

}  // namespace nvard
