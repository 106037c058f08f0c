#include "nvard/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nvard {

namespace {

double sequence_mean(const Eigen::VectorXd& x) { return x.mean(); }

double sequence_var(const Eigen::VectorXd& x) {
  const long n = x.size();
  if (n < 2) return 0.0;
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(n - 1);
}

// Splits every chain in half, dropping one draw from odd-length chains.
std::vector<Eigen::VectorXd> split_halves(const std::vector<Eigen::VectorXd>& chains) {
  std::vector<Eigen::VectorXd> halves;
  for (const auto& c : chains) {
    const long h = c.size() / 2;
    if (h < 2) throw std::invalid_argument("diagnostics: chains too short to split");
    halves.push_back(c.head(h));
    halves.push_back(c.segment(c.size() - h, h));
  }
  return halves;
}

// Autocovariance at a given lag, normalized by n (biased), relative to the
// sequence's own mean.
double autocov(const Eigen::VectorXd& x, long lag) {
  const long n = x.size();
  const double m = x.mean();
  double s = 0.0;
  for (long i = 0; i + lag < n; ++i) s += (x[i] - m) * (x[i + lag] - m);
  return s / static_cast<double>(n);
}

}  // namespace

double split_rhat(const std::vector<Eigen::VectorXd>& chains) {
  if (chains.empty()) throw std::invalid_argument("split_rhat: no chains");
  const auto seqs = split_halves(chains);
  const long n = seqs.front().size();
  const long c = static_cast<long>(seqs.size());

  double w = 0.0;
  Eigen::VectorXd means(c);
  for (long s = 0; s < c; ++s) {
    means[s] = sequence_mean(seqs[s]);
    w += sequence_var(seqs[s]);
  }
  w /= static_cast<double>(c);

  const double grand = means.mean();
  double b = 0.0;
  if (c > 1)
    b = static_cast<double>(n) * (means.array() - grand).square().sum() /
        static_cast<double>(c - 1);

  const double scale = std::abs(grand) + 1.0;
  if (w < 1e-300 * scale * scale) return 1.0;  // constant draws

  const double var_plus =
      (static_cast<double>(n - 1) / static_cast<double>(n)) * w + b / static_cast<double>(n);
  return std::sqrt(var_plus / w);
}

double effective_sample_size(const std::vector<Eigen::VectorXd>& chains) {
  if (chains.empty()) throw std::invalid_argument("effective_sample_size: no chains");
  const long c = static_cast<long>(chains.size());
  const long n = chains.front().size();
  for (const auto& ch : chains)
    if (ch.size() != n)
      throw std::invalid_argument("effective_sample_size: unequal chain lengths");
  if (n < 4) throw std::invalid_argument("effective_sample_size: chains too short");

  double w = 0.0;
  Eigen::VectorXd means(c);
  for (long s = 0; s < c; ++s) {
    means[s] = sequence_mean(chains[s]);
    w += sequence_var(chains[s]);
  }
  w /= static_cast<double>(c);

  double b_over_n = 0.0;
  if (c > 1) b_over_n = (means.array() - means.mean()).square().sum() / static_cast<double>(c - 1);

  const double var_plus =
      (static_cast<double>(n - 1) / static_cast<double>(n)) * w + b_over_n;
  const double scale = std::abs(means.mean()) + 1.0;
  if (var_plus < 1e-300 * scale * scale)
    return static_cast<double>(c * n);  // constant draws carry no autocorrelation

  // rho_hat at each lag, averaged over chains, truncated where the sum of
  // an even/odd autocorrelation pair first turns negative.
  const long max_lag = n - 1;
  double tau = 1.0;
  double prev_pair = std::numeric_limits<double>::max();
  for (long lag = 1; lag + 1 <= max_lag; lag += 2) {
    double acov_even = 0.0, acov_odd = 0.0;
    for (const auto& ch : chains) {
      acov_even += autocov(ch, lag);
      acov_odd += autocov(ch, lag + 1);
    }
    acov_even /= static_cast<double>(c);
    acov_odd /= static_cast<double>(c);
    const double rho_even = 1.0 - (w - acov_even) / var_plus;
    const double rho_odd = 1.0 - (w - acov_odd) / var_plus;
    double pair = rho_even + rho_odd;
    if (pair < 0.0) break;
    if (pair > prev_pair) pair = prev_pair;  // enforce monotone decrease
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  return static_cast<double>(c * n) / tau;
}

}  // namespace nvard
