#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace nvard {

// Split-chain potential scale reduction: each chain is halved and the
// usual between/within variance ratio is computed over the 2C sequences.
// Returns 1 for (numerically) constant draws.
double split_rhat(const std::vector<Eigen::VectorXd>& chains);

// Effective sample size across chains from chain-averaged autocorrelations,
// truncated at the first negative even/odd lag pair.
double effective_sample_size(const std::vector<Eigen::VectorXd>& chains);

struct ScalarDiagnostic {
  std::string name;
  double ess = 0.0;
  double rhat = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

// Conventional convergence threshold used in reports.
inline constexpr double kRhatThreshold = 1.05;

}  // namespace nvard
