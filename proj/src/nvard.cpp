#include "nvard/nvard.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <sstream>

namespace nvard {

SuffStats SuffStats::zero(int K) {
  SuffStats s;
  s.S_ZZ = MatrixXd::Zero(K, K);
  s.S_ZY = VectorXd::Zero(K);
  s.S_YY = 0.0;
  s.N = 0;
  s.K = K;
  return s;
}

void SuffStats::add(const MatrixXd& Z, const VectorXd& Y) {
  if (Z.cols() != K)
    throw std::invalid_argument("SuffStats::add: design column count mismatch");
  if (Z.rows() != Y.size())
    throw std::invalid_argument("SuffStats::add: design/response row count mismatch");
  S_ZZ.selfadjointView<Eigen::Lower>().rankUpdate(Z.transpose());
  S_ZZ = S_ZZ.selfadjointView<Eigen::Lower>();
  S_ZY.noalias() += Z.transpose() * Y;
  S_YY += Y.squaredNorm();
  N += Y.size();
}

SuffStats& SuffStats::operator+=(const SuffStats& other) {
  if (other.K != K) throw std::invalid_argument("SuffStats: merging incompatible K");
  S_ZZ += other.S_ZZ;
  S_ZY += other.S_ZY;
  S_YY += other.S_YY;
  N += other.N;
  return *this;
}

SuffStats accumulate(std::span<const DesignMatrix> designs,
                     std::span<const VectorXd> responses) {
  if (designs.empty()) throw std::invalid_argument("accumulate: T >= 1 required");
  if (designs.size() != responses.size())
    throw std::invalid_argument("accumulate: one response vector per design required");
  const int K = designs.front().K();
  const long rows = designs.front().rows.rows();
  SuffStats s = SuffStats::zero(K);
  for (std::size_t t = 0; t < designs.size(); ++t) {
    if (designs[t].K() != K || designs[t].rows.rows() != rows ||
        responses[t].size() != rows) {
      std::ostringstream os;
      os << "accumulate: dimension mismatch at block " << t;
      throw std::invalid_argument(os.str());
    }
    s.add(designs[t].rows, responses[t]);
  }
  return s;
}

namespace {

// Identifies linearly dependent columns via a rank-revealing QR of the
// Gram matrix; the permutation's trailing columns are the offenders.
std::vector<int> dependent_columns(const MatrixXd& gram) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(gram);
  qr.setThreshold(1e-10);
  const long rank = qr.rank();
  std::vector<int> cols;
  const auto& perm = qr.colsPermutation().indices();
  for (long c = rank; c < gram.cols(); ++c) cols.push_back(perm[c]);
  std::sort(cols.begin(), cols.end());
  return cols;
}

std::string describe_columns(const std::vector<int>& cols,
                             const std::vector<std::string>& labels) {
  std::ostringstream os;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) os << ", ";
    os << cols[c];
    if (cols[c] >= 0 && cols[c] < static_cast<int>(labels.size()))
      os << " (" << labels[cols[c]] << ")";
  }
  return os.str();
}

}  // namespace

NvardPosterior fit_nvard(const SuffStats& stats,
                         std::vector<std::string> column_labels) {
  const int K = stats.K;
  if (stats.N <= K)
    throw std::invalid_argument("fit_nvard: N > K required for a proper posterior");

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(stats.S_ZZ);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin <= 0.0 || lmin / lmax < kRcondThreshold) {
    std::vector<int> cols = dependent_columns(stats.S_ZZ);
    std::ostringstream os;
    os << "fit_nvard: Gram matrix is rank deficient or ill conditioned"
       << " (rcond estimate " << (lmax > 0.0 ? lmin / lmax : 0.0) << ")";
    if (!cols.empty())
      os << "; dependent columns: " << describe_columns(cols, column_labels);
    throw rank_deficiency_error(os.str(), std::move(cols));
  }

  Eigen::LLT<MatrixXd> llt(stats.S_ZZ);
  if (llt.info() != Eigen::Success)
    throw rank_deficiency_error("fit_nvard: Cholesky factorization failed",
                                dependent_columns(stats.S_ZZ));

  NvardPosterior post;
  post.N = stats.N;
  post.K = K;
  post.v = stats.N - K;
  post.mu = llt.solve(stats.S_ZY);
  double q = stats.S_YY - stats.S_ZY.dot(post.mu);
  if (q < 0.0) {
    if (q < -1e-8 * std::max(stats.S_YY, 1.0))
      throw std::logic_error("fit_nvard: residual q is significantly negative");
    q = 0.0;
  }
  post.q = q;
  post.a = 0.5 * static_cast<double>(post.v);
  post.b = 0.5 * q;
  MatrixXd inv = llt.solve(MatrixXd::Identity(K, K));
  post.Sigma = (q / static_cast<double>(post.v)) * 0.5 * (inv + inv.transpose());
  post.column_labels = std::move(column_labels);
  return post;
}

std::pair<VectorXd, double> point_estimates(const NvardPosterior& post) {
  if (post.a <= 1.0)
    throw std::invalid_argument(
        "point_estimates: posterior variance mean undefined (need N > K + 2)");
  return {post.mu, post.b / (post.a - 1.0)};
}

std::vector<Interval> credible_intervals(const NvardPosterior& post, double level) {
  if (level < 0.0 || level >= 1.0)
    throw std::invalid_argument("credible_intervals: level must be in [0,1)");
  if (post.v < 1) throw std::invalid_argument("credible_intervals: v >= 1 required");
  boost::math::students_t dist(static_cast<double>(post.v));
  const double tq = boost::math::quantile(dist, 0.5 * (1.0 + level));
  std::vector<Interval> out;
  out.reserve(post.K);
  for (int k = 0; k < post.K; ++k) {
    const double half = tq * std::sqrt(post.Sigma(k, k));
    out.push_back({post.mu[k] - half, post.mu[k] + half});
  }
  return out;
}

VectorXd predict_nvard(const NvardPosterior& post, const DesignMatrix& Z_next) {
  if (Z_next.K() != post.K)
    throw std::invalid_argument("predict_nvard: design column count mismatch");
  return Z_next.rows * post.mu;
}

double residual_sum_of_squares(const SuffStats& stats, const VectorXd& beta) {
  if (beta.size() != stats.K)
    throw std::invalid_argument("residual_sum_of_squares: beta length mismatch");
  const double rss = stats.S_YY - 2.0 * beta.dot(stats.S_ZY) +
                     beta.dot(stats.S_ZZ.selfadjointView<Eigen::Lower>() * beta);
  return rss < 0.0 ? 0.0 : rss;
}

double log_joint_posterior(const SuffStats& stats, const VectorXd& beta, double sigma2) {
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("log_joint_posterior: sigma2 must be positive");
  const double rss = residual_sum_of_squares(stats, beta);
  return -(0.5 * static_cast<double>(stats.N) + 1.0) * std::log(sigma2) -
         rss / (2.0 * sigma2);
}

}  // namespace nvard
