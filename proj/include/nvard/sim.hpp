#pragma once

#include "nvard/vcnvard.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nvard {

struct CovariateGen {
  std::string name;
  double mean = 0.0;
  double sd = 1.0;
  bool time_invariant = false;
};

// Generator specification shared by both simulators.  `beta` is the full
// K = 7 + M coefficient vector; for the time-varying model the entries at
// `varying_columns` are the initial varying blocks and the rest stay
// constant.
struct SimSpec {
  int n = 0;
  int T = 0;
  VectorXd beta;
  std::vector<CovariateGen> covariates;
  double sigma2_eps = 1.0;
  std::vector<int> varying_columns;  // time-varying model only
  double sigma2_u = 0.0;
  double y0_mean = 0.0;
  double y0_sd = 1.0;
  std::uint64_t seed = 0;
  std::optional<WeightScheme> weights;  // defaults to equal weights

  int M() const { return static_cast<int>(covariates.size()); }
  int K() const { return kBaseColumns + M(); }
};

// Sum of the six lag-channel coefficient magnitudes; the generators
// require this to stay below 1 (each aggregate is a convex combination of
// lagged flows, so the bound keeps the recursion from exploding).
double lag_coefficient_mass(const VectorXd& beta);

struct NvardSim {
  DyadicPanel panel;
  CovariateTensor X;  // slices t = 1..T+1
  WeightScheme weights;
  std::vector<VectorXd> noise;  // eps_t for t = 1..T, vecd order
};

// Runs the constant-coefficient recursion forward from Y_0.
NvardSim simulate_nvard(const SimSpec& spec);

struct VcnvardSim {
  DyadicPanel panel;
  CovariateTensor X;
  WeightScheme weights;
  MatrixXd beta2_path;          // T x m, row t-1 is the true varying block
  std::vector<VectorXd> noise;  // eps_t for t = 1..T
};

// Runs the state-space recursion forward: the varying blocks follow a
// random walk with variance sigma2_u, observations follow the merged
// coefficient vector at each t.
VcnvardSim simulate_vcnvard(const SimSpec& spec);

struct MarginalGrid {
  VectorXd grid;
  VectorXd density;  // normalized over the grid
};

struct BruteForceOptions {
  int beta_points = 401;
  int sigma_points = 801;
  double beta_halfwidth_sds = 6.0;
  double self_check_tolerance = 0.01;
};

struct BruteForcePosterior {
  std::vector<MarginalGrid> beta_marginals;  // one per coefficient
  MarginalGrid sigma2_marginal;
};

// Numerically integrates the unnormalized joint posterior of the
// constant-coefficient model on grids, independently of the closed-form
// fit: the residual profile at each grid point comes from a least-squares
// solve of the stacked raw data, the variance direction is integrated by
// trapezoid on a log-spaced grid, and all normalization is numeric.
// Fails if halving the grid moves a normalization constant by more than
// the self-check tolerance.
BruteForcePosterior brute_force_nvard_posterior(
    std::span<const DesignMatrix> designs, std::span<const VectorXd> responses,
    const BruteForceOptions& options = {});

// Closed-form densities the oracle is compared against.
double univariate_t_pdf(double x, double df, double location, double scale);
double inverse_gamma_pdf(double x, double shape, double rate);

struct RatioCheckFamily {
  std::string name;
  double max_abs_deviation = 0.0;
  int probes = 0;
};

struct RatioCheckReport {
  std::vector<RatioCheckFamily> families;
  double tolerance = 0.0;
  bool passed() const;
  std::string failing_families() const;
  double max_deviation() const;
};

// Certifies every full-conditional family against the joint posterior:
// for random states and random block perturbations, the log-joint
// difference must equal the conditional log-density difference.
RatioCheckReport conditional_ratio_check(const VcnvardData& data, int n_probes,
                                         std::uint64_t seed, double tolerance = 1e-8);

}  // namespace nvard
