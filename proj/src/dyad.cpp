#include "nvard/dyad.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nvard {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string pair_str(int i, int j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}
}  // namespace

std::pair<int, int> vecd_pair(int p, int n) {
  if (n < 2 || p < 0 || p >= n * n - n)
    throw std::invalid_argument("vecd_pair: position out of range");
  const int j = p / (n - 1);
  int i = p % (n - 1);
  if (i >= j) ++i;  // skip the diagonal slot in column j
  return {i, j};
}

VectorXd vecd(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n < 2 || a.cols() != n)
    throw std::invalid_argument("vecd: matrix must be square with n >= 2");
  VectorXd v(n * n - n);
  int p = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) v[p++] = a(i, j);
  return v;
}

MatrixXd unvecd(const VectorXd& v, int n) {
  if (n < 2) throw std::invalid_argument("unvecd: n must be >= 2");
  if (v.size() != static_cast<long>(n) * n - n) {
    std::ostringstream os;
    os << "unvecd: vector length " << v.size() << " does not equal n^2-n = "
       << n * n - n;
    throw std::invalid_argument(os.str());
  }
  MatrixXd a = MatrixXd::Constant(n, n, kNaN);
  int p = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) a(i, j) = v[p++];
  return a;
}

DyadicPanel::DyadicPanel(std::vector<std::string> time_labels,
                         std::vector<MatrixXd> flows, bool transformed)
    : time_labels_(std::move(time_labels)),
      flows_(std::move(flows)),
      transformed_(transformed) {
  if (flows_.empty())
    throw std::invalid_argument("DyadicPanel: at least the initial observation is required");
  if (time_labels_.size() != flows_.size())
    throw std::invalid_argument("DyadicPanel: one time label per flow matrix required");
  n_ = static_cast<int>(flows_.front().rows());
  if (n_ < 3)
    throw std::invalid_argument("DyadicPanel: n >= 3 required (aggregates need a third node)");
  for (std::size_t t = 0; t < flows_.size(); ++t) {
    MatrixXd& y = flows_[t];
    if (y.rows() != n_ || y.cols() != n_)
      throw std::invalid_argument("DyadicPanel: all flow matrices must be n x n");
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) {
        if (i == j) continue;
        if (!std::isfinite(y(i, j))) {
          std::ostringstream os;
          os << "DyadicPanel: non-finite flow at " << pair_str(i, j)
             << " time " << time_labels_[t];
          throw std::invalid_argument(os.str());
        }
      }
      y(j, j) = kNaN;  // mask the diagonal regardless of input
    }
  }
}

double DyadicPanel::flow(int i, int j, int t) const {
  if (t < 0 || t > T()) throw std::out_of_range("DyadicPanel::flow: t out of range");
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::out_of_range("DyadicPanel::flow: node index out of range");
  if (i == j)
    throw std::invalid_argument("DyadicPanel::flow: diagonal " + pair_str(i, j) +
                                " is undefined");
  return flows_[t](i, j);
}

const MatrixXd& DyadicPanel::matrix(int t) const {
  if (t < 0 || t > T()) throw std::out_of_range("DyadicPanel::matrix: t out of range");
  return flows_[t];
}

VectorXd DyadicPanel::response(int t) const { return vecd(matrix(t)); }

CovariateTensor::CovariateTensor(int n, std::vector<std::string> names,
                                 std::vector<MatrixXd> slices)
    : n_(n), names_(std::move(names)), slices_(std::move(slices)) {
  if (n_ < 2) throw std::invalid_argument("CovariateTensor: n >= 2 required");
  const long rows = static_cast<long>(n_) * n_ - n_;
  const long m = static_cast<long>(names_.size());
  for (std::size_t s = 0; s < slices_.size(); ++s) {
    const MatrixXd& x = slices_[s];
    if (x.rows() != rows || x.cols() != m)
      throw std::invalid_argument("CovariateTensor: slice has wrong shape");
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "CovariateTensor: non-finite covariate value at t=" << s + 1;
      throw std::invalid_argument(os.str());
    }
  }
}

CovariateTensor CovariateTensor::empty(int n, int max_t) {
  std::vector<MatrixXd> slices(static_cast<std::size_t>(max_t),
                               MatrixXd::Zero(n * n - n, 0));
  return CovariateTensor(n, {}, std::move(slices));
}

const MatrixXd& CovariateTensor::slice(int t) const {
  if (t < 1 || t > max_t())
    throw std::out_of_range("CovariateTensor::slice: t out of range");
  return slices_[static_cast<std::size_t>(t) - 1];
}

double CovariateTensor::value(int i, int j, int t, int covariate) const {
  if (i == j) throw std::invalid_argument("CovariateTensor::value: diagonal undefined");
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::out_of_range("CovariateTensor::value: node index out of range");
  if (covariate < 0 || covariate >= M())
    throw std::out_of_range("CovariateTensor::value: covariate index out of range");
  return slice(t)(vecd_index(i, j, n_), covariate);
}

const char* to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::origin_origin: return "oo";
    case WeightFamily::origin_dest: return "od";
    case WeightFamily::dest_origin: return "do";
    case WeightFamily::dest_dest: return "dd";
  }
  return "?";
}

WeightFamily weight_family_from_string(const std::string& s) {
  if (s == "oo") return WeightFamily::origin_origin;
  if (s == "od") return WeightFamily::origin_dest;
  if (s == "do") return WeightFamily::dest_origin;
  if (s == "dd") return WeightFamily::dest_dest;
  throw std::invalid_argument("unknown weight family '" + s + "' (expected oo|od|do|dd)");
}

WeightScheme::WeightScheme(int n, std::array<MatrixXd, 4> families)
    : n_(n), families_(std::move(families)) {
  if (n_ < 3) throw std::invalid_argument("WeightScheme: n >= 3 required");
  const long rows = static_cast<long>(n_) * n_ - n_;
  for (const MatrixXd& w : families_)
    if (w.rows() != rows || w.cols() != n_)
      throw std::invalid_argument("WeightScheme: family matrix must be (n^2-n) x n");
}

double WeightScheme::weight(WeightFamily f, int i, int j, int k) const {
  if (i == j || k == i || k == j)
    throw std::invalid_argument("WeightScheme::weight: k must differ from i and j, i != j");
  return families_[static_cast<int>(f)](vecd_index(i, j, n_), k);
}

const MatrixXd& WeightScheme::family(WeightFamily f) const {
  return families_[static_cast<int>(f)];
}

MatrixXd& WeightScheme::mutable_family(WeightFamily f) {
  return families_[static_cast<int>(f)];
}

WeightScheme equal_weights(int n) {
  if (n < 3) throw std::invalid_argument("equal_weights: n >= 3 required");
  const int rows = n * n - n;
  const double w = 1.0 / (n - 2);
  MatrixXd base = MatrixXd::Zero(rows, n);
  for (int p = 0; p < rows; ++p) {
    auto [i, j] = vecd_pair(p, n);
    for (int k = 0; k < n; ++k)
      if (k != i && k != j) base(p, k) = w;
  }
  return WeightScheme(n, {base, base, base, base});
}

std::vector<WeightViolation> validate_weights(const WeightScheme& scheme) {
  std::vector<WeightViolation> out;
  const int n = scheme.n();
  for (WeightFamily f : kWeightFamilies) {
    const MatrixXd& w = scheme.family(f);
    for (int p = 0; p < w.rows(); ++p) {
      auto [i, j] = vecd_pair(p, n);
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const double v = w(p, k);
        if (k == i || k == j) {
          if (v != 0.0) {
            std::ostringstream os;
            os << "w(" << to_string(f) << ") has nonzero weight " << v
               << " at excluded node k=" << k << " for pair " << pair_str(i, j);
            out.push_back({f, i, j, v, os.str()});
          }
          continue;
        }
        if (!(v >= 0.0)) {  // catches negatives and NaN
          std::ostringstream os;
          os << "w(" << to_string(f) << ") has negative weight " << v
             << " at k=" << k << " for pair " << pair_str(i, j);
          out.push_back({f, i, j, v, os.str()});
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > kWeightSumTolerance) {
        std::ostringstream os;
        os << "w(" << to_string(f) << ") row for pair " << pair_str(i, j)
           << " sums to " << sum << " (expected 1)";
        out.push_back({f, i, j, sum, os.str()});
      }
    }
  }
  return out;
}

}  // namespace nvard
