#pragma once

#include "nvard/diagnostics.hpp"
#include "nvard/nvard.hpp"
#include "nvard/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nvard {

struct GibbsConfig {
  long chain_length = 300000;
  long burn_in = 180000;
  int thin = 10;
  std::uint64_t seed = 0;
  int n_chains = 1;

  long retained_per_chain() const { return (chain_length - burn_in) / thin; }
  void validate() const;
};

// One sampler state: observation and state-increment variances, the
// constant-coefficient block and the per-time varying blocks.
struct GibbsState {
  double sigma2_eps = 1.0;
  double sigma2_u = 1.0;
  VectorXd beta1;                // length K - m
  std::vector<VectorXd> beta2;   // T vectors of length m
};

// Observation blocks for the time-varying model: per time point the
// constant-column block Z1_t, the varying-column block Z2_t and the
// response Y_t, plus the cross products the full conditionals consume.
class VcnvardData {
 public:
  VcnvardData(std::vector<DesignMatrix> designs, std::vector<VectorXd> responses,
              std::vector<int> varying_columns);

  int T() const { return static_cast<int>(Y_.size()); }
  int m() const { return static_cast<int>(varying_columns_.size()); }
  int n_constant() const { return static_cast<int>(constant_columns_.size()); }
  long rows() const { return rows_; }

  const std::vector<int>& varying_columns() const { return varying_columns_; }
  const std::vector<int>& constant_columns() const { return constant_columns_; }
  const std::vector<std::string>& column_labels() const { return column_labels_; }
  std::vector<std::string> constant_labels() const;
  std::vector<std::string> varying_labels() const;

  // t is 1-based throughout.
  const MatrixXd& Z1(int t) const { return Z1_.at(t - 1); }
  const MatrixXd& Z2(int t) const { return Z2_.at(t - 1); }
  const VectorXd& Y(int t) const { return Y_.at(t - 1); }

  // Sufficient statistics of the unsplit design, for the warm start.
  const SuffStats& full_stats() const { return full_stats_; }

  const MatrixXd& S11_sum() const { return S11_sum_; }
  const MatrixXd& G2_sum() const { return G2_sum_; }
  const VectorXd& Z1Y_sum() const { return Z1Y_sum_; }
  const VectorXd& Z2Y_sum() const { return Z2Y_sum_; }
  const MatrixXd& Z1Z2_sum() const { return Z1Z2_sum_; }
  const MatrixXd& G2(int t) const { return G2_.at(t - 1); }
  const MatrixXd& Z1Z2(int t) const { return Z1Z2_.at(t - 1); }
  const VectorXd& Z1Y(int t) const { return Z1Y_.at(t - 1); }
  const VectorXd& Z2Y(int t) const { return Z2Y_.at(t - 1); }
  double YY(int t) const { return YY_.at(t - 1); }

  // Sum over t of ||Y_t - Z1_t beta1 - Z2_t beta2_t||^2 via the
  // precomputed cross products, clamped at zero.
  double residual_quadform(const GibbsState& state) const;

 private:
  long rows_ = 0;
  std::vector<int> varying_columns_, constant_columns_;
  std::vector<std::string> column_labels_;
  std::vector<MatrixXd> Z1_, Z2_;
  std::vector<VectorXd> Y_;
  SuffStats full_stats_;
  MatrixXd S11_sum_, G2_sum_, Z1Z2_sum_;
  VectorXd Z1Y_sum_, Z2Y_sum_;
  std::vector<MatrixXd> G2_, Z1Z2_;
  std::vector<VectorXd> Z1Y_, Z2Y_;
  std::vector<double> YY_;
};

// Inverse-gamma conditional parameters; rate 0 is floored and flagged.
struct IgParams {
  double shape = 0.0;
  double rate = 0.0;
  bool floored = false;
};

inline constexpr double kRateFloor = 1e-300;

// Gaussian conditional N(precision^-1 shift, precision^-1).
struct GaussianParams {
  MatrixXd precision;
  VectorXd shift;
};

IgParams sigma2_eps_conditional(const VcnvardData& data, const GibbsState& state);
IgParams sigma2_u_conditional(const VcnvardData& data, const GibbsState& state);
GaussianParams beta1_conditional(const VcnvardData& data, const GibbsState& state);
GaussianParams beta2_conditional(const VcnvardData& data, const GibbsState& state, int t);
// Conditional of a single varying block shared by all t (the reduction to
// constant coefficients used by the degenerate-split check).
GaussianParams tied_varying_conditional(const VcnvardData& data, const GibbsState& state);

double sample_sigma2_eps(const VcnvardData& data, const GibbsState& state,
                         RngStream& rng, bool* floored = nullptr);
double sample_sigma2_u(const VcnvardData& data, const GibbsState& state,
                       RngStream& rng, bool* floored = nullptr);
VectorXd sample_beta1(const VcnvardData& data, const GibbsState& state, RngStream& rng);
VectorXd sample_beta2_t(const VcnvardData& data, const GibbsState& state, int t,
                        RngStream& rng);

enum class GibbsMode {
  time_varying,   // the full model: random-walk varying blocks
  tied_constant,  // varying blocks tied across t, sigma2_u not sampled
};

// One full sweep in fixed scan order: sigma2_eps, sigma2_u, beta1, then
// beta2_1..beta2_T ascending.  Returns the number of floored IG rates.
int gibbs_sweep(const VcnvardData& data, GibbsState& state, RngStream& rng,
                GibbsMode mode = GibbsMode::time_varying);

// Deterministic warm start from the closed-form fit on the same data.
GibbsState init_state(const NvardPosterior& fit, const std::vector<int>& varying_columns,
                      int T);
GibbsState init_state(const NvardPosterior& fit, const VcnvardData& data);

inline constexpr double kDivergenceFactor = 1e12;

struct VcnvardFit {
  // Retained draws, chain-major: rows 0..per_chain-1 are chain 0, etc.
  MatrixXd beta1_draws;       // L_total x (K-m)
  MatrixXd beta2_draws;       // L_total x (T*m); column (t-1)*m + j
  VectorXd sigma2_eps_draws;
  VectorXd sigma2_u_draws;    // empty in tied_constant mode
  int n_chains = 1;
  long per_chain = 0;

  // Posterior means (plain averages of the retained draws).
  VectorXd beta1_hat;
  MatrixXd beta2_hat;         // T x m
  double sigma2_eps_hat = 0.0;
  double sigma2_u_hat = 0.0;

  std::vector<ScalarDiagnostic> diagnostics;
  long floored_rate_events = 0;
  GibbsMode mode = GibbsMode::time_varying;
  int T = 0, m = 0, n_constant = 0;
  std::vector<std::string> constant_labels, varying_labels;

  // Per-chain views of one draw column.
  std::vector<VectorXd> split_chains(const VectorXd& column) const;
};

VcnvardFit run_gibbs(const VcnvardData& data, const GibbsConfig& config,
                     GibbsMode mode = GibbsMode::time_varying);
// As above but starting from an explicit state instead of the warm start.
VcnvardFit run_gibbs_from(const VcnvardData& data, const GibbsConfig& config,
                          const GibbsState& initial,
                          GibbsMode mode = GibbsMode::time_varying);

// One-step prediction Z1_next beta1_hat + Z2_next beta2_hat_T (the last
// varying block; the random walk makes it the conditional mean at T+1).
VectorXd predict_vcnvard(const VcnvardFit& fit, const MatrixXd& Z1_next,
                         const MatrixXd& Z2_next);

// Unnormalized log joint posterior of (sigma2_eps, sigma2_u, beta1, beta2)
// computed from the stored raw blocks.
double log_joint_vcnvard(const VcnvardData& data, const GibbsState& state);

}  // namespace nvard
