#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "robgxe/model.hpp"
#include "robgxe/rng.hpp"
#include "robgxe/summary.hpp"

namespace robgxe {

struct NormalParams {
  double mean = 0.0;
  double var = 1.0;
};

/// (1 - spike_prob) N(mean, var) + spike_prob * delta_0.
struct SpikeSlabParams {
  double mean = 0.0;
  double var = 1.0;
  double spike_prob = 0.0;
};

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
};

struct InvGaussParams {
  double mu = 1.0;
  double lambda = 1.0;
};

/// Full conditional of a latent slab scale: either Exponential(rate) for the
/// scale itself (coefficient in the spike) or Inverse-Gaussian for its reciprocal.
struct SlabScaleConditional {
  bool reciprocal_ig = false;
  double exp_rate = 1.0;
  InvGaussParams ig;
};

inline constexpr double kResidualClamp = 1e-10;
inline constexpr double kCoefficientClamp = 1e-12;

/// Inverse-Gamma(shape, scale); the reciprocal is Gamma(shape, rate = scale).
struct InvGammaParams {
  double shape = 1.0;
  double scale = 1.0;
};

/// pi / (pi + (1 - pi) exp(log_bf)) evaluated on the log-odds scale, where
/// log_bf is the log ratio of the slab and spike marginal likelihoods.
double spike_probability(double pi, double log_bf);

/// Gibbs sampler for the LAD likelihood written as a normal scale mixture with
/// latent v_i. With `spike_slab` the coefficient priors are spike-and-slab
/// (LADBLSS); without it they are plain Laplace / Bayesian-lasso (LADBL).
///
/// Keeps the residual y - mu incrementally; every update below leaves the
/// cached residual and weights consistent with state().
class LadGibbs {
 public:
  LadGibbs(const MarginalDesign& design, const Hyperparameters& hp, bool spike_slab, ChainState init);

  const ChainState& state() const { return st_; }
  /// Replace the state (e.g. to pin values in a test); refreshes the caches.
  void set_state(ChainState st);
  const Vector& residual() const { return resid_; }
  bool spike_slab() const { return spike_; }

  NormalParams alpha_conditional(std::size_t k) const;
  NormalParams gamma_conditional(std::size_t t) const;
  SpikeSlabParams beta_conditional() const;
  SpikeSlabParams eta_conditional(std::size_t k) const;
  SlabScaleConditional s1_conditional() const;
  SlabScaleConditional s2_conditional(std::size_t k) const;
  GammaParams phi1_conditional() const;
  GammaParams phi2_conditional() const;
  BetaParams pi1_conditional() const;
  BetaParams pi2_conditional() const;
  GammaParams tau_conditional() const;
  /// Conditional of 1 / v_i.
  InvGaussParams v_conditional(std::size_t i) const;

  void update_v(RngStream& rng);
  void update_tau(RngStream& rng);
  void update_alpha(RngStream& rng);
  void update_gamma(RngStream& rng);
  void update_beta(RngStream& rng);
  void update_eta(RngStream& rng);
  void update_s1(RngStream& rng);
  void update_s2(RngStream& rng);
  void update_phi_sq(RngStream& rng);
  void update_pi(RngStream& rng);

  /// One scan in the order v, tau, alpha, gamma, beta, eta, s1, s2, phi^2, pi.
  /// Blocks set in `frozen` keep their current values.
  void sweep(RngStream& rng, std::uint32_t frozen = 0);

 private:
  NormalParams column_conditional(Eigen::Index col, double prior_var, double& score) const;
  void set_coefficient(Eigen::Index col, double value);
  void refresh_weights();
  void recompute_residual();

  Matrix Z_;  // n x (2q + m + 1): E | C | x | w
  Hyperparameters hp_;
  bool spike_;
  std::size_t n_, q_, m_;
  ChainState st_;
  Vector theta_;   // coefficients in Z_ column order
  Vector resid_;
  Vector weight_;  // tau / (xi2^2 v_i)
  std::size_t sweeps_ = 0;
};

/// Gibbs sampler for the Gaussian-likelihood Bayesian lasso, with
/// spike-and-slab coefficient priors (BLSS) or without (BL).
class GaussGibbs {
 public:
  GaussGibbs(const MarginalDesign& design, const Hyperparameters& hp, bool spike_slab, ChainState init);

  const ChainState& state() const { return st_; }
  void set_state(ChainState st);
  bool spike_slab() const { return spike_; }

  /// Block conditional of alpha (or gamma): mean and covariance.
  struct BlockParams {
    Vector mean;
    Matrix cov;
  };
  BlockParams alpha_conditional() const;
  BlockParams gamma_conditional() const;
  SpikeSlabParams beta_conditional() const;
  SpikeSlabParams eta_conditional(std::size_t k) const;
  /// For tau_c^2 / tau_ek^2: Exponential for the scale (spike) or IG for its reciprocal.
  SlabScaleConditional tau_c_conditional() const;
  SlabScaleConditional tau_e_conditional(std::size_t k) const;
  GammaParams lambda_c_conditional() const;
  GammaParams lambda_e_conditional() const;
  BetaParams pi_c_conditional() const;
  BetaParams pi_e_conditional() const;
  InvGammaParams sigma2_conditional() const;

  void update_alpha(RngStream& rng);
  void update_gamma(RngStream& rng);
  void update_beta(RngStream& rng);
  void update_eta(RngStream& rng);
  void update_tau_sq(RngStream& rng);
  void update_lambda_sq(RngStream& rng);
  void update_pi(RngStream& rng);
  void update_sigma2(RngStream& rng);

  /// alpha, gamma, beta, eta, tau^2, lambda^2, pi, sigma^2.
  void sweep(RngStream& rng, std::uint32_t frozen = 0);

 private:
  BlockParams block_conditional(const Matrix& X, const Matrix& XtX, const Vector& coef,
                                const Vector& prior_var) const;
  Vector draw_block(const Matrix& X, const Matrix& XtX, const Vector& coef, const Vector& prior_var,
                    RngStream& rng) const;
  SpikeSlabParams slab_conditional(const Eigen::Ref<const Vector>& col, double col_sq, double coef,
                                   double scale, double pi) const;
  double penalty_sum() const;

  MarginalDesign design_;
  Hyperparameters hp_;
  bool spike_;
  std::size_t n_, q_, m_;
  Matrix EtE_, CtC_, WtW_;
  double xtx_ = 0.0;
  Vector prior_alpha_, prior_gamma_;
  ChainState st_;
  Vector resid_;
  std::size_t sweeps_ = 0;
};

/// Runs one chain and returns its retained coefficient draws.
ChainTrace run_single_chain(const MarginalDesign& design, MethodId method, const Hyperparameters& hp,
                            const GibbsConfig& cfg, RngStream& rng, InitMode init);

/// Runs cfg.n_chains chains. Chain 0 uses `rng`; chain c uses the stream with
/// the same seed and id.chain + c. A single chain starts neutral unless
/// cfg.overdispersed; several chains start overdispersed.
std::vector<ChainTrace> run_chains(const MarginalDesign& design, MethodId method, const Hyperparameters& hp,
                                   const GibbsConfig& cfg, RngStream& rng);

/// run_chains followed by summarize.
PosteriorSummary run_chain(const MarginalDesign& design, MethodId method, const Hyperparameters& hp,
                           const GibbsConfig& cfg, RngStream& rng);

inline PosteriorSummary run_chain_ladblss(const MarginalDesign& d, const Hyperparameters& hp,
                                          const GibbsConfig& cfg, RngStream& rng) {
  return run_chain(d, MethodId::LADBLSS, hp, cfg, rng);
}
inline PosteriorSummary run_chain_ladbl(const MarginalDesign& d, const Hyperparameters& hp,
                                        const GibbsConfig& cfg, RngStream& rng) {
  return run_chain(d, MethodId::LADBL, hp, cfg, rng);
}
inline PosteriorSummary run_chain_blss(const MarginalDesign& d, const Hyperparameters& hp,
                                       const GibbsConfig& cfg, RngStream& rng) {
  return run_chain(d, MethodId::BLSS, hp, cfg, rng);
}
inline PosteriorSummary run_chain_bl(const MarginalDesign& d, const Hyperparameters& hp,
                                     const GibbsConfig& cfg, RngStream& rng) {
  return run_chain(d, MethodId::BL, hp, cfg, rng);
}

}  // namespace robgxe
