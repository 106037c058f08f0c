#include "nvard/design.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nvard {

std::vector<std::string> design_labels(const std::vector<std::string>& covariate_names) {
  std::vector<std::string> labels = {"intercept", "lag_self", "lag_inverse",
                                     "agg_oo",    "agg_od",   "agg_do",
                                     "agg_dd"};
  labels.insert(labels.end(), covariate_names.begin(), covariate_names.end());
  return labels;
}

std::vector<int> resolve_columns(const std::vector<std::string>& wanted,
                                 const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (const std::string& w : wanted) {
    auto it = std::find(labels.begin(), labels.end(), w);
    if (it == labels.end())
      throw std::invalid_argument("unknown design column '" + w + "'");
    out.push_back(static_cast<int>(it - labels.begin()));
  }
  return out;
}

VectorXd build_row(const DyadicPanel& panel, const WeightScheme& weights,
                   const CovariateTensor& X, int i, int j, int t) {
  const int n = panel.n();
  if (weights.n() != n || X.n() != n)
    throw std::invalid_argument("build_row: panel, weights and covariates disagree on n");
  if (i == j) throw std::invalid_argument("build_row: i must differ from j");
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::out_of_range("build_row: node index out of range");
  if (t < 1 || t > panel.T() + 1)
    throw std::out_of_range("build_row: t must be in 1..T+1");
  if (X.M() > 0 && t > X.max_t())
    throw std::out_of_range("build_row: covariates missing at requested t");

  const MatrixXd& y = panel.matrix(t - 1);
  const int p = vecd_index(i, j, n);
  const MatrixXd& w_oo = weights.family(WeightFamily::origin_origin);
  const MatrixXd& w_od = weights.family(WeightFamily::origin_dest);
  const MatrixXd& w_do = weights.family(WeightFamily::dest_origin);
  const MatrixXd& w_dd = weights.family(WeightFamily::dest_dest);

  double oo = 0.0, od = 0.0, dd = 0.0, dox = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;  // diagonal flows are masked, never read
    oo += w_oo(p, k) * y(i, k);
    od += w_od(p, k) * y(k, i);
    dox += w_do(p, k) * y(j, k);
    dd += w_dd(p, k) * y(k, j);
  }

  const int M = X.M();
  VectorXd row(kBaseColumns + M);
  row[0] = 1.0;
  row[1] = y(i, j);
  row[2] = y(j, i);
  row[3] = oo;
  row[4] = od;
  row[5] = dox;
  row[6] = dd;
  if (M > 0) row.tail(M) = X.slice(t).row(p).transpose();
  return row;
}

DesignMatrix build_design(const DyadicPanel& panel, const WeightScheme& weights,
                          const CovariateTensor& X, int t) {
  const int n = panel.n();
  const int rows = n * n - n;
  DesignMatrix z;
  z.t = t;
  z.column_labels = design_labels(X.names());
  z.rows.resize(rows, kBaseColumns + X.M());
  for (int p = 0; p < rows; ++p) {
    auto [i, j] = vecd_pair(p, n);
    z.rows.row(p) = build_row(panel, weights, X, i, j, t).transpose();
  }
  return z;
}

DesignSplit split_design(const DesignMatrix& Z, const std::vector<int>& varying_columns) {
  const int K = Z.K();
  if (varying_columns.empty())
    throw std::invalid_argument("split_design: varying column set must be nonempty");
  std::set<int> varying;
  for (int c : varying_columns) {
    if (c < 0 || c >= K) {
      std::ostringstream os;
      os << "split_design: column index " << c << " out of range 0.." << K - 1;
      throw std::out_of_range(os.str());
    }
    if (!varying.insert(c).second)
      throw std::invalid_argument("split_design: duplicate varying column index");
  }

  DesignSplit s;
  s.varying_columns.assign(varying.begin(), varying.end());
  for (int c = 0; c < K; ++c)
    if (!varying.count(c)) s.constant_columns.push_back(c);

  const long rows = Z.rows.rows();
  s.Z1.resize(rows, static_cast<long>(s.constant_columns.size()));
  s.Z2.resize(rows, static_cast<long>(s.varying_columns.size()));
  for (std::size_t c = 0; c < s.constant_columns.size(); ++c)
    s.Z1.col(c) = Z.rows.col(s.constant_columns[c]);
  for (std::size_t c = 0; c < s.varying_columns.size(); ++c)
    s.Z2.col(c) = Z.rows.col(s.varying_columns[c]);
  return s;
}

MatrixXd reassemble(const DesignSplit& split) {
  const long rows = split.Z2.rows();
  const long K = split.Z1.cols() + split.Z2.cols();
  MatrixXd z(rows, K);
  for (std::size_t c = 0; c < split.constant_columns.size(); ++c)
    z.col(split.constant_columns[c]) = split.Z1.col(c);
  for (std::size_t c = 0; c < split.varying_columns.size(); ++c)
    z.col(split.varying_columns[c]) = split.Z2.col(c);
  return z;
}

}  // namespace nvard
