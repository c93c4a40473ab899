#include <cmath>

#include "robgxe/distributions.hpp"
#include "robgxe/errors.hpp"
#include "robgxe/samplers.hpp"

namespace robgxe {

namespace {

double clamp_magnitude(double x, double floor) {
  const double a = std::abs(x);
  return a < floor ? floor : a;
}

}  // namespace

GaussGibbs::GaussGibbs(const MarginalDesign& design, const Hyperparameters& hp, bool spike_slab,
                       ChainState init)
    : design_(design), hp_(hp), spike_(spike_slab), n_(design.n()), q_(design.q()), m_(design.m()) {
  EtE_ = design_.E.transpose() * design_.E;
  CtC_ = design_.C.transpose() * design_.C;
  WtW_ = design_.w.transpose() * design_.w;
  xtx_ = design_.x.squaredNorm();
  prior_alpha_.resize(static_cast<Eigen::Index>(q_));
  for (std::size_t k = 0; k < q_; ++k) prior_alpha_[static_cast<Eigen::Index>(k)] = hp_.gauss_alpha_var(k);
  prior_gamma_.resize(static_cast<Eigen::Index>(m_));
  for (std::size_t t = 0; t < m_; ++t) prior_gamma_[static_cast<Eigen::Index>(t)] = hp_.gauss_gamma_var(t);
  set_state(std::move(init));
}

void GaussGibbs::set_state(ChainState st) {
  const auto q = static_cast<Eigen::Index>(q_);
  if (st.alpha.size() != q || st.gamma.size() != static_cast<Eigen::Index>(m_) || st.eta.size() != q ||
      st.s2.size() != q || st.eta_active.size() != q_) {
    throw ConfigError("Gaussian sampler: chain state dimensions do not match the design");
  }
  if (!spike_) {
    st.beta_active = true;
    std::fill(st.eta_active.begin(), st.eta_active.end(), 1);
  }
  st_ = std::move(st);
  resid_ = design_.y - design_.E * st_.alpha - design_.C * st_.gamma - design_.x * st_.beta -
           design_.w * st_.eta;
}

GaussGibbs::BlockParams GaussGibbs::block_conditional(const Matrix& X, const Matrix& XtX, const Vector& coef,
                                                      const Vector& prior_var) const {
  Matrix prec = XtX / st_.sigma2;
  prec.diagonal() += prior_var.cwiseInverse();
  const Vector b = (X.transpose() * resid_ + XtX * coef) / st_.sigma2;
  Eigen::LLT<Matrix> llt(prec);
  if (llt.info() != Eigen::Success) throw GuardError("Gaussian sampler: block precision not positive definite");
  const Matrix cov = llt.solve(Matrix::Identity(prec.rows(), prec.cols()));
  return {llt.solve(b), cov};
}

Vector GaussGibbs::draw_block(const Matrix& X, const Matrix& XtX, const Vector& coef, const Vector& prior_var,
                              RngStream& rng) const {
  Matrix prec = XtX / st_.sigma2;
  prec.diagonal() += prior_var.cwiseInverse();
  const Vector b = (X.transpose() * resid_ + XtX * coef) / st_.sigma2;
  Eigen::LLT<Matrix> llt(prec);
  if (llt.info() != Eigen::Success) throw GuardError("Gaussian sampler: block precision not positive definite");
  Vector z(prec.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.standard_normal();
  // prec = L L^T, so L^{-T} z has covariance prec^{-1}
  return llt.solve(b) + llt.matrixU().solve(z);
}

GaussGibbs::BlockParams GaussGibbs::alpha_conditional() const {
  return block_conditional(design_.E, EtE_, st_.alpha, prior_alpha_);
}

GaussGibbs::BlockParams GaussGibbs::gamma_conditional() const {
  return block_conditional(design_.C, CtC_, st_.gamma, prior_gamma_);
}

SpikeSlabParams GaussGibbs::slab_conditional(const Eigen::Ref<const Vector>& col, double col_sq, double coef,
                                             double scale, double pi) const {
  const double sigma_b = 1.0 / (col_sq + 1.0 / scale);
  const double s = col.dot(resid_) + coef * col_sq;
  SpikeSlabParams out{sigma_b * s, st_.sigma2 * sigma_b, 0.0};
  if (!std::isfinite(out.mean) || !std::isfinite(out.var)) {
    throw GuardError("Gaussian sampler: non-finite slab conditional");
  }
  if (spike_) {
    const double log_bf = -0.5 * std::log(scale) + 0.5 * std::log(sigma_b) + s * s * sigma_b / (2.0 * st_.sigma2);
    out.spike_prob = spike_probability(pi, log_bf);
  }
  return out;
}

SpikeSlabParams GaussGibbs::beta_conditional() const {
  return slab_conditional(design_.x, xtx_, st_.beta, st_.s1, st_.pi1);
}

SpikeSlabParams GaussGibbs::eta_conditional(std::size_t k) const {
  const auto kk = static_cast<Eigen::Index>(k);
  return slab_conditional(design_.w.col(kk), WtW_(kk, kk), st_.eta[kk], st_.s2[kk], st_.pi2);
}

SlabScaleConditional GaussGibbs::tau_c_conditional() const {
  SlabScaleConditional c;
  if (spike_ && !st_.beta_active) {
    c.exp_rate = st_.phi1_sq / 2.0;
    return c;
  }
  const double b = clamp_magnitude(st_.beta, kCoefficientClamp);
  c.reciprocal_ig = true;
  c.ig = {std::sqrt(st_.sigma2 * st_.phi1_sq) / b, st_.phi1_sq};
  return c;
}

SlabScaleConditional GaussGibbs::tau_e_conditional(std::size_t k) const {
  SlabScaleConditional c;
  if (spike_ && !st_.eta_active[k]) {
    c.exp_rate = st_.phi2_sq / 2.0;
    return c;
  }
  const double e = clamp_magnitude(st_.eta[static_cast<Eigen::Index>(k)], kCoefficientClamp);
  c.reciprocal_ig = true;
  c.ig = {std::sqrt(st_.sigma2 * st_.phi2_sq) / e, st_.phi2_sq};
  return c;
}

GammaParams GaussGibbs::lambda_c_conditional() const {
  return {hp_.gauss.a_c + 1.0, st_.s1 / 2.0 + hp_.gauss.b_c};
}

GammaParams GaussGibbs::lambda_e_conditional() const {
  return {hp_.gauss.a_e + static_cast<double>(q_), st_.s2.sum() / 2.0 + hp_.gauss.b_e};
}

BetaParams GaussGibbs::pi_c_conditional() const {
  const double active = st_.beta_active ? 1.0 : 0.0;
  return {hp_.gauss.r_c + 1.0 - active, hp_.gauss.u_c + active};
}

BetaParams GaussGibbs::pi_e_conditional() const {
  double active = 0.0;
  for (char a : st_.eta_active) active += a ? 1.0 : 0.0;
  return {hp_.gauss.r_e + static_cast<double>(q_) - active, hp_.gauss.u_e + active};
}

double GaussGibbs::penalty_sum() const {
  double pen = st_.beta * st_.beta / st_.s1;
  for (std::size_t k = 0; k < q_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    pen += st_.eta[kk] * st_.eta[kk] / st_.s2[kk];
  }
  return pen;
}

InvGammaParams GaussGibbs::sigma2_conditional() const {
  const double rss = resid_.squaredNorm();
  const double half = 0.5 * (rss + penalty_sum());
  if (!std::isfinite(half)) throw GuardError("Gaussian sampler: non-finite sigma^2 scale");
  const double n = static_cast<double>(n_);
  if (spike_) {
    double active = st_.beta_active ? 1.0 : 0.0;
    for (char a : st_.eta_active) active += a ? 1.0 : 0.0;
    return {hp_.gauss.s + 0.5 * (n + active), hp_.gauss.h + half};
  }
  return {0.5 * (n + 1.0 + static_cast<double>(q_)), half};
}

void GaussGibbs::update_alpha(RngStream& rng) {
  if (q_ == 0) return;
  const Vector next = draw_block(design_.E, EtE_, st_.alpha, prior_alpha_, rng);
  resid_.noalias() -= design_.E * (next - st_.alpha);
  st_.alpha = next;
}

void GaussGibbs::update_gamma(RngStream& rng) {
  if (m_ == 0) return;
  const Vector next = draw_block(design_.C, CtC_, st_.gamma, prior_gamma_, rng);
  resid_.noalias() -= design_.C * (next - st_.gamma);
  st_.gamma = next;
}

namespace {

bool draw_spike_slab(const SpikeSlabParams& c, bool spike, RngStream& rng, double& value) {
  if (spike && rng.uniform() < c.spike_prob) {
    value = 0.0;
    return false;
  }
  value = sample_normal(c.mean, c.var, rng);
  return true;
}

double draw_slab_scale(const SlabScaleConditional& c, RngStream& rng) {
  if (!c.reciprocal_ig) return sample_exponential(c.exp_rate, rng);
  return 1.0 / sample_inverse_gaussian(c.ig.mu, c.ig.lambda, rng);
}

}  // namespace

void GaussGibbs::update_beta(RngStream& rng) {
  double b;
  st_.beta_active = draw_spike_slab(beta_conditional(), spike_, rng, b);
  resid_.noalias() -= (b - st_.beta) * design_.x;
  st_.beta = b;
}

void GaussGibbs::update_eta(RngStream& rng) {
  for (std::size_t k = 0; k < q_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    double e;
    st_.eta_active[k] = draw_spike_slab(eta_conditional(k), spike_, rng, e) ? 1 : 0;
    resid_.noalias() -= (e - st_.eta[kk]) * design_.w.col(kk);
    st_.eta[kk] = e;
  }
}

void GaussGibbs::update_tau_sq(RngStream& rng) {
  st_.s1 = draw_slab_scale(tau_c_conditional(), rng);
  for (std::size_t k = 0; k < q_; ++k) {
    st_.s2[static_cast<Eigen::Index>(k)] = draw_slab_scale(tau_e_conditional(k), rng);
  }
}

void GaussGibbs::update_lambda_sq(RngStream& rng) {
  const auto gc = lambda_c_conditional();
  st_.phi1_sq = sample_gamma(gc.shape, gc.rate, rng);
  const auto ge = lambda_e_conditional();
  st_.phi2_sq = sample_gamma(ge.shape, ge.rate, rng);
}

void GaussGibbs::update_pi(RngStream& rng) {
  if (!spike_) return;
  const auto bc = pi_c_conditional();
  st_.pi1 = sample_beta(bc.a, bc.b, rng);
  const auto be = pi_e_conditional();
  st_.pi2 = sample_beta(be.a, be.b, rng);
}

void GaussGibbs::update_sigma2(RngStream& rng) {
  const auto ig = sigma2_conditional();
  st_.sigma2 = sample_inverse_gamma(ig.shape, ig.scale, rng);
}

void GaussGibbs::sweep(RngStream& rng, std::uint32_t frozen) {
  if (++sweeps_ % 64 == 0) {
    resid_ = design_.y - design_.E * st_.alpha - design_.C * st_.gamma - design_.x * st_.beta -
             design_.w * st_.eta;
  }
  auto live = [frozen](Block b) { return (frozen & b) == 0; };
  if (live(kAlpha)) update_alpha(rng);
  if (live(kGamma)) update_gamma(rng);
  if (live(kBeta)) update_beta(rng);
  if (live(kEta)) update_eta(rng);
  if (live(kSlabScale)) update_tau_sq(rng);
  if (live(kRate)) update_lambda_sq(rng);
  if (live(kMix)) update_pi(rng);
  if (live(kScale)) update_sigma2(rng);
  if (!std::isfinite(st_.sigma2) || !(st_.sigma2 > 0.0) || !std::isfinite(st_.beta) || !std::isfinite(st_.s1) ||
      !std::isfinite(st_.phi1_sq) || !std::isfinite(st_.phi2_sq)) {
    throw GuardError("Gaussian sampler: state left the support");
  }
}

}  // namespace robgxe
