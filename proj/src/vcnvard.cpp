#include "nvard/vcnvard.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace nvard {

void GibbsConfig::validate() const {
  if (chain_length <= 0) throw std::invalid_argument("GibbsConfig: chain_length must be positive");
  if (burn_in < 0 || burn_in >= chain_length)
    throw std::invalid_argument("GibbsConfig: burn_in must be in [0, chain_length)");
  if (thin < 1) throw std::invalid_argument("GibbsConfig: thin must be >= 1");
  if (n_chains < 1) throw std::invalid_argument("GibbsConfig: n_chains must be >= 1");
  if (retained_per_chain() < 100)
    throw std::invalid_argument("GibbsConfig: fewer than 100 retained draws per chain");
}

VcnvardData::VcnvardData(std::vector<DesignMatrix> designs,
                         std::vector<VectorXd> responses,
                         std::vector<int> varying_columns) {
  if (designs.empty()) throw std::invalid_argument("VcnvardData: T >= 1 required");
  if (designs.size() != responses.size())
    throw std::invalid_argument("VcnvardData: one response per design required");
  column_labels_ = designs.front().column_labels;
  rows_ = designs.front().rows.rows();
  full_stats_ = accumulate(designs, responses);

  DesignSplit first = split_design(designs.front(), varying_columns);
  varying_columns_ = first.varying_columns;
  constant_columns_ = first.constant_columns;
  const int kc = n_constant();
  const int mv = m();

  S11_sum_ = MatrixXd::Zero(kc, kc);
  G2_sum_ = MatrixXd::Zero(mv, mv);
  Z1Z2_sum_ = MatrixXd::Zero(kc, mv);
  Z1Y_sum_ = VectorXd::Zero(kc);
  Z2Y_sum_ = VectorXd::Zero(mv);

  const int T = static_cast<int>(designs.size());
  for (int t = 0; t < T; ++t) {
    DesignSplit s = (t == 0) ? std::move(first) : split_design(designs[t], varying_columns);
    const VectorXd& y = responses[t];
    if (y.size() != rows_ || designs[t].rows.rows() != rows_)
      throw std::invalid_argument("VcnvardData: row count mismatch across t");
    Z1Y_.push_back(s.Z1.transpose() * y);
    Z2Y_.push_back(s.Z2.transpose() * y);
    Z1Z2_.push_back(s.Z1.transpose() * s.Z2);
    G2_.push_back(s.Z2.transpose() * s.Z2);
    YY_.push_back(y.squaredNorm());
    S11_sum_.noalias() += s.Z1.transpose() * s.Z1;
    G2_sum_ += G2_.back();
    Z1Z2_sum_ += Z1Z2_.back();
    Z1Y_sum_ += Z1Y_.back();
    Z2Y_sum_ += Z2Y_.back();
    Z1_.push_back(std::move(s.Z1));
    Z2_.push_back(std::move(s.Z2));
    Y_.push_back(y);
  }
}

std::vector<std::string> VcnvardData::constant_labels() const {
  std::vector<std::string> out;
  for (int c : constant_columns_) out.push_back(column_labels_.at(c));
  return out;
}

std::vector<std::string> VcnvardData::varying_labels() const {
  std::vector<std::string> out;
  for (int c : varying_columns_) out.push_back(column_labels_.at(c));
  return out;
}

double VcnvardData::residual_quadform(const GibbsState& state) const {
  const VectorXd& b1 = state.beta1;
  double rss = 0.0;
  for (int t = 1; t <= T(); ++t) {
    const VectorXd& b2 = state.beta2.at(t - 1);
    double r = YY(t) - 2.0 * b1.dot(Z1Y(t)) - 2.0 * b2.dot(Z2Y(t)) +
               2.0 * b1.dot(Z1Z2(t) * b2) + b2.dot(G2(t) * b2);
    rss += r;
  }
  rss += b1.dot(S11_sum_ * b1);
  return rss < 0.0 ? 0.0 : rss;
}

namespace {

void check_state(const VcnvardData& data, const GibbsState& state) {
  if (state.beta1.size() != data.n_constant())
    throw std::invalid_argument("GibbsState: beta1 length mismatch");
  if (static_cast<int>(state.beta2.size()) != data.T())
    throw std::invalid_argument("GibbsState: one beta2 vector per t required");
  for (const auto& b : state.beta2)
    if (b.size() != data.m())
      throw std::invalid_argument("GibbsState: beta2 length mismatch");
  if (!(state.sigma2_eps > 0.0) || !(state.sigma2_u > 0.0))
    throw std::invalid_argument("GibbsState: variances must be positive");
}

IgParams floor_rate(double shape, double rate) {
  IgParams p;
  p.shape = shape;
  if (rate <= 0.0) {
    p.rate = kRateFloor;
    p.floored = true;
  } else {
    p.rate = rate;
  }
  return p;
}

}  // namespace

IgParams sigma2_eps_conditional(const VcnvardData& data, const GibbsState& state) {
  check_state(data, state);
  const double shape = 0.5 * static_cast<double>(data.rows()) * data.T();
  return floor_rate(shape, 0.5 * data.residual_quadform(state));
}

IgParams sigma2_u_conditional(const VcnvardData& data, const GibbsState& state) {
  check_state(data, state);
  const int T = data.T();
  if (T < 2) throw std::invalid_argument("sigma2_u_conditional: T >= 2 required");
  double incr = 0.0;
  for (int t = 2; t <= T; ++t)
    incr += (state.beta2[t - 1] - state.beta2[t - 2]).squaredNorm();
  return floor_rate(0.5 * data.m() * (T - 1), 0.5 * incr);
}

GaussianParams beta1_conditional(const VcnvardData& data, const GibbsState& state) {
  check_state(data, state);
  const double inv_eps = 1.0 / state.sigma2_eps;
  GaussianParams p;
  p.precision = inv_eps * data.S11_sum();
  VectorXd b = data.Z1Y_sum();
  for (int t = 1; t <= data.T(); ++t) b.noalias() -= data.Z1Z2(t) * state.beta2[t - 1];
  p.shift = inv_eps * b;
  return p;
}

GaussianParams beta2_conditional(const VcnvardData& data, const GibbsState& state, int t) {
  check_state(data, state);
  const int T = data.T();
  if (t < 1 || t > T) throw std::out_of_range("beta2_conditional: t must be in 1..T");
  if (T < 2) throw std::invalid_argument("beta2_conditional: T >= 2 required");
  const double inv_u = 1.0 / state.sigma2_u;
  const double inv_eps = 1.0 / state.sigma2_eps;
  const int mv = data.m();

  // Random-walk prior contributes one neighbor at the ends, two inside.
  const double prior_mult = (t == 1 || t == T) ? 1.0 : 2.0;
  GaussianParams p;
  p.precision = prior_mult * inv_u * MatrixXd::Identity(mv, mv) + inv_eps * data.G2(t);
  VectorXd b = VectorXd::Zero(mv);
  if (t > 1) b += inv_u * state.beta2[t - 2];
  if (t < T) b += inv_u * state.beta2[t];
  b.noalias() += inv_eps * (data.Z2Y(t) - data.Z1Z2(t).transpose() * state.beta1);
  p.shift = b;
  return p;
}

GaussianParams tied_varying_conditional(const VcnvardData& data, const GibbsState& state) {
  check_state(data, state);
  const double inv_eps = 1.0 / state.sigma2_eps;
  GaussianParams p;
  p.precision = inv_eps * data.G2_sum();
  p.shift = inv_eps * (data.Z2Y_sum() - data.Z1Z2_sum().transpose() * state.beta1);
  return p;
}

double sample_sigma2_eps(const VcnvardData& data, const GibbsState& state,
                         RngStream& rng, bool* floored) {
  IgParams p = sigma2_eps_conditional(data, state);
  if (floored) *floored = p.floored;
  return rng.inverse_gamma(p.shape, p.rate);
}

double sample_sigma2_u(const VcnvardData& data, const GibbsState& state,
                       RngStream& rng, bool* floored) {
  IgParams p = sigma2_u_conditional(data, state);
  if (floored) *floored = p.floored;
  return rng.inverse_gamma(p.shape, p.rate);
}

VectorXd sample_beta1(const VcnvardData& data, const GibbsState& state, RngStream& rng) {
  if (data.n_constant() == 0) return VectorXd(0);
  GaussianParams p = beta1_conditional(data, state);
  Eigen::LLT<MatrixXd> llt(p.precision);
  if (llt.info() != Eigen::Success)
    throw rank_deficiency_error("sample_beta1: singular precision matrix", {});
  VectorXd mean = llt.solve(p.shift);
  return mean + llt.matrixU().solve(rng.standard_normal(data.n_constant()));
}

VectorXd sample_beta2_t(const VcnvardData& data, const GibbsState& state, int t,
                        RngStream& rng) {
  GaussianParams p = beta2_conditional(data, state, t);
  return sample_gaussian_precision(p.precision, p.shift, rng);
}

int gibbs_sweep(const VcnvardData& data, GibbsState& state, RngStream& rng,
                GibbsMode mode) {
  int floored_events = 0;
  bool fl = false;
  state.sigma2_eps = sample_sigma2_eps(data, state, rng, &fl);
  if (fl) ++floored_events;
  if (mode == GibbsMode::time_varying) {
    state.sigma2_u = sample_sigma2_u(data, state, rng, &fl);
    if (fl) ++floored_events;
  }
  if (data.n_constant() > 0) state.beta1 = sample_beta1(data, state, rng);
  if (mode == GibbsMode::time_varying) {
    for (int t = 1; t <= data.T(); ++t)
      state.beta2[t - 1] = sample_beta2_t(data, state, t, rng);
  } else {
    GaussianParams p = tied_varying_conditional(data, state);
    VectorXd common = sample_gaussian_precision(p.precision, p.shift, rng);
    for (auto& b : state.beta2) b = common;
  }
  return floored_events;
}

GibbsState init_state(const NvardPosterior& fit, const std::vector<int>& varying_columns,
                      int T) {
  if (T < 1) throw std::invalid_argument("init_state: T >= 1 required");
  std::vector<bool> is_varying(fit.K, false);
  for (int c : varying_columns) {
    if (c < 0 || c >= fit.K) throw std::out_of_range("init_state: varying column out of range");
    is_varying[c] = true;
  }
  const int mv = static_cast<int>(varying_columns.size());
  GibbsState s;
  s.beta1.resize(fit.K - mv);
  VectorXd varying_block(mv);
  int c1 = 0, c2 = 0;
  for (int c = 0; c < fit.K; ++c) {
    if (is_varying[c])
      varying_block[c2++] = fit.mu[c];
    else
      s.beta1[c1++] = fit.mu[c];
  }
  s.beta2.assign(static_cast<std::size_t>(T), varying_block);
  s.sigma2_eps = point_estimates(fit).second;
  if (!(s.sigma2_eps > 0.0)) s.sigma2_eps = 1e-8;  // exact-fit data
  s.sigma2_u = 0.01 * (1.0 + varying_block.squaredNorm() / std::max(mv, 1));
  return s;
}

GibbsState init_state(const NvardPosterior& fit, const VcnvardData& data) {
  return init_state(fit, data.varying_columns(), data.T());
}

std::vector<VectorXd> VcnvardFit::split_chains(const VectorXd& column) const {
  std::vector<VectorXd> out;
  for (int c = 0; c < n_chains; ++c)
    out.push_back(column.segment(static_cast<long>(c) * per_chain, per_chain));
  return out;
}

namespace {

void push_diagnostic(std::vector<ScalarDiagnostic>& diags, const VcnvardFit& fit,
                     const std::string& name, const VectorXd& column) {
  ScalarDiagnostic d;
  d.name = name;
  auto chains = fit.split_chains(column);
  d.ess = effective_sample_size(chains);
  d.rhat = split_rhat(chains);
  d.mean = column.mean();
  d.sd = std::sqrt((column.array() - d.mean).square().sum() /
                   std::max<long>(column.size() - 1, 1));
  diags.push_back(std::move(d));
}

}  // namespace

VcnvardFit run_gibbs_from(const VcnvardData& data, const GibbsConfig& config,
                          const GibbsState& initial, GibbsMode mode) {
  config.validate();
  if (mode == GibbsMode::time_varying && data.T() < 2)
    throw std::invalid_argument("run_gibbs: T >= 2 required");
  check_state(data, initial);

  const long L = config.retained_per_chain();
  const long L_total = L * config.n_chains;
  const int kc = data.n_constant();
  const int mv = data.m();
  const int T = data.T();

  VcnvardFit fit;
  fit.mode = mode;
  fit.n_chains = config.n_chains;
  fit.per_chain = L;
  fit.T = T;
  fit.m = mv;
  fit.n_constant = kc;
  fit.constant_labels = data.constant_labels();
  fit.varying_labels = data.varying_labels();
  fit.beta1_draws.resize(L_total, kc);
  fit.beta2_draws.resize(L_total, static_cast<long>(T) * mv);
  fit.sigma2_eps_draws.resize(L_total);
  if (mode == GibbsMode::time_varying) fit.sigma2_u_draws.resize(L_total);

  const double eps0 = initial.sigma2_eps;
  for (int chain = 0; chain < config.n_chains; ++chain) {
    RngStream rng(config.seed, static_cast<std::uint64_t>(chain));
    GibbsState state = initial;
    long kept = 0;
    for (long s = 1; s <= config.chain_length; ++s) {
      fit.floored_rate_events += gibbs_sweep(data, state, rng, mode);
      if (state.sigma2_eps > kDivergenceFactor * eps0) {
        std::ostringstream os;
        os << "run_gibbs: sigma2_eps diverged at sweep " << s << " of chain " << chain
           << " (" << state.sigma2_eps << " vs initial " << eps0 << ")";
        throw std::runtime_error(os.str());
      }
      if (s > config.burn_in && (s - config.burn_in) % config.thin == 0) {
        const long r = static_cast<long>(chain) * L + kept;
        fit.beta1_draws.row(r) = state.beta1.transpose();
        for (int t = 0; t < T; ++t)
          fit.beta2_draws.row(r).segment(static_cast<long>(t) * mv, mv) =
              state.beta2[t].transpose();
        fit.sigma2_eps_draws[r] = state.sigma2_eps;
        if (mode == GibbsMode::time_varying) fit.sigma2_u_draws[r] = state.sigma2_u;
        ++kept;
      }
    }
  }

  fit.beta1_hat = kc > 0 ? VectorXd(fit.beta1_draws.colwise().mean().transpose())
                         : VectorXd(0);
  fit.beta2_hat.resize(T, mv);
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < mv; ++j)
      fit.beta2_hat(t, j) = fit.beta2_draws.col(static_cast<long>(t) * mv + j).mean();
  fit.sigma2_eps_hat = fit.sigma2_eps_draws.mean();
  fit.sigma2_u_hat = (mode == GibbsMode::time_varying)
                         ? fit.sigma2_u_draws.mean()
                         : std::numeric_limits<double>::quiet_NaN();

  push_diagnostic(fit.diagnostics, fit, "sigma2_eps", fit.sigma2_eps_draws);
  if (mode == GibbsMode::time_varying)
    push_diagnostic(fit.diagnostics, fit, "sigma2_u", fit.sigma2_u_draws);
  for (int j = 0; j < kc; ++j)
    push_diagnostic(fit.diagnostics, fit, "beta1[" + fit.constant_labels[j] + "]",
                    fit.beta1_draws.col(j));
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < mv; ++j) {
      std::ostringstream os;
      os << "beta2[t=" << t + 1 << "][" << fit.varying_labels[j] << "]";
      push_diagnostic(fit.diagnostics, fit, os.str(),
                      fit.beta2_draws.col(static_cast<long>(t) * mv + j));
    }

  if (fit.floored_rate_events > 0)
    std::cerr << "run_gibbs: " << fit.floored_rate_events
              << " degenerate conditional rate(s) floored at " << kRateFloor << "\n";
  return fit;
}

VcnvardFit run_gibbs(const VcnvardData& data, const GibbsConfig& config, GibbsMode mode) {
  NvardPosterior warm = fit_nvard(data.full_stats(), data.column_labels());
  return run_gibbs_from(data, config, init_state(warm, data), mode);
}

VectorXd predict_vcnvard(const VcnvardFit& fit, const MatrixXd& Z1_next,
                         const MatrixXd& Z2_next) {
  if (Z1_next.cols() != fit.n_constant || Z2_next.cols() != fit.m)
    throw std::invalid_argument("predict_vcnvard: column counts do not match the split");
  if (Z1_next.rows() != Z2_next.rows())
    throw std::invalid_argument("predict_vcnvard: block row counts differ");
  VectorXd pred = Z2_next * fit.beta2_hat.row(fit.T - 1).transpose();
  if (fit.n_constant > 0) pred.noalias() += Z1_next * fit.beta1_hat;
  return pred;
}

double log_joint_vcnvard(const VcnvardData& data, const GibbsState& state) {
  check_state(data, state);
  const int T = data.T();
  const int mv = data.m();
  double resid = 0.0;
  for (int t = 1; t <= T; ++t) {
    VectorXd r = data.Y(t) - data.Z2(t) * state.beta2[t - 1];
    if (data.n_constant() > 0) r.noalias() -= data.Z1(t) * state.beta1;
    resid += r.squaredNorm();
  }
  double incr = 0.0;
  for (int t = 2; t <= T; ++t)
    incr += (state.beta2[t - 1] - state.beta2[t - 2]).squaredNorm();

  const double nt = static_cast<double>(data.rows()) * T;
  return -std::log(state.sigma2_eps) - std::log(state.sigma2_u) -
         0.5 * mv * (T - 1) * std::log(state.sigma2_u) - incr / (2.0 * state.sigma2_u) -
         0.5 * nt * std::log(state.sigma2_eps) - resid / (2.0 * state.sigma2_eps);
}

}  // namespace nvard
