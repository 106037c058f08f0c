#pragma once

#include "nvard/design.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nvard {

// Sufficient statistics of the stacked regression: sums over t of Z_t'Z_t,
// Z_t'Y_t and Y_t'Y_t, with N the total observation count (n^2-n)T.
struct SuffStats {
  MatrixXd S_ZZ;
  VectorXd S_ZY;
  double S_YY = 0.0;
  long N = 0;
  int K = 0;

  static SuffStats zero(int K);
  void add(const MatrixXd& Z, const VectorXd& Y);
  SuffStats& operator+=(const SuffStats& other);
  friend SuffStats operator+(SuffStats a, const SuffStats& b) { return a += b; }
};

SuffStats accumulate(std::span<const DesignMatrix> designs,
                     std::span<const VectorXd> responses);

// Thrown when the Gram matrix is singular or numerically rank deficient.
class rank_deficiency_error : public std::runtime_error {
 public:
  rank_deficiency_error(std::string what, std::vector<int> columns)
      : std::runtime_error(std::move(what)), columns_(std::move(columns)) {}
  const std::vector<int>& columns() const { return columns_; }

 private:
  std::vector<int> columns_;
};

// Reciprocal-condition threshold below which the Gram matrix is rejected.
inline constexpr double kRcondThreshold = 1e-12;

// Posterior of the constant-coefficient model under flat/1-over-variance
// priors: beta | data ~ Mt(v, mu, Sigma) and sigma2 | data ~ IG(a, b).
struct NvardPosterior {
  long v = 0;      // degrees of freedom, N - K
  VectorXd mu;     // location (also the posterior mean of beta)
  MatrixXd Sigma;  // scale matrix (q/v) * S_ZZ^-1
  double a = 0.0;  // IG shape, v/2
  double b = 0.0;  // IG rate, q/2
  double q = 0.0;  // residual sum of squares at mu
  long N = 0;
  int K = 0;
  std::vector<std::string> column_labels;  // optional, for reporting
};

NvardPosterior fit_nvard(const SuffStats& stats,
                         std::vector<std::string> column_labels = {});

// (beta_hat, sigma2_hat); requires a > 1 so the IG mean exists.
std::pair<VectorXd, double> point_estimates(const NvardPosterior& post);

struct Interval {
  double lo, hi;
};

// Equal-tailed marginal intervals mu_k +- t_{v,(1+level)/2} sqrt(Sigma_kk).
std::vector<Interval> credible_intervals(const NvardPosterior& post, double level);

// One-step prediction: Z_next * mu.
VectorXd predict_nvard(const NvardPosterior& post, const DesignMatrix& Z_next);

// Unnormalized log posterior: -(N/2+1) log sigma2 - RSS(beta)/(2 sigma2)
// with RSS(beta) = S_YY - 2 beta'S_ZY + beta'S_ZZ beta.
double log_joint_posterior(const SuffStats& stats, const VectorXd& beta, double sigma2);

// RSS(beta) from sufficient statistics (clamped at zero against rounding).
double residual_sum_of_squares(const SuffStats& stats, const VectorXd& beta);

}  // namespace nvard
