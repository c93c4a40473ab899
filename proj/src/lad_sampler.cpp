#include <cmath>
#include <string>

#include "robgxe/distributions.hpp"
#include "robgxe/errors.hpp"
#include "robgxe/samplers.hpp"

namespace robgxe {

double spike_probability(double pi, double log_bf) {
  if (pi <= 0.0) return 0.0;
  if (pi >= 1.0) return 1.0;
  const double logit_slab = std::log1p(-pi) - std::log(pi) + log_bf;
  if (std::isnan(logit_slab)) throw GuardError("spike probability: non-finite log odds");
  // 1 / (1 + exp(logit_slab)) without overflow
  if (logit_slab > 0.0) {
    const double e = std::exp(-logit_slab);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(logit_slab));
}

namespace {

double clamp_magnitude(double x, double floor) {
  const double a = std::abs(x);
  return a < floor ? floor : a;
}

}  // namespace

LadGibbs::LadGibbs(const MarginalDesign& design, const Hyperparameters& hp, bool spike_slab,
                   ChainState init)
    : hp_(hp), spike_(spike_slab), n_(design.n()), q_(design.q()), m_(design.m()) {
  const auto n = static_cast<Eigen::Index>(n_);
  const auto q = static_cast<Eigen::Index>(q_);
  const auto m = static_cast<Eigen::Index>(m_);
  Z_.resize(n, 2 * q + m + 1);
  Z_.leftCols(q) = design.E;
  Z_.middleCols(q, m) = design.C;
  Z_.col(q + m) = design.x;
  Z_.rightCols(q) = design.w;
  resid_ = design.y;  // y is kept implicitly: residual + Z theta
  theta_ = Vector::Zero(Z_.cols());
  set_state(std::move(init));
}

void LadGibbs::set_state(ChainState st) {
  const auto q = static_cast<Eigen::Index>(q_);
  const auto m = static_cast<Eigen::Index>(m_);
  if (st.alpha.size() != q || st.gamma.size() != m || st.eta.size() != q ||
      st.v.size() != static_cast<Eigen::Index>(n_) || st.s2.size() != q ||
      st.eta_active.size() != q_) {
    throw ConfigError("LAD sampler: chain state dimensions do not match the design");
  }
  if (!spike_) {
    st.beta_active = true;
    std::fill(st.eta_active.begin(), st.eta_active.end(), 1);
  }
  // Recover y from the current cache before swapping in the new coefficients.
  const Vector y = resid_ + Z_ * theta_;
  st_ = std::move(st);
  theta_.segment(0, q) = st_.alpha;
  theta_.segment(q, m) = st_.gamma;
  theta_[q + m] = st_.beta;
  theta_.segment(q + m + 1, q) = st_.eta;
  resid_ = y - Z_ * theta_;
  refresh_weights();
}

void LadGibbs::recompute_residual() {
  const Vector y = resid_ + Z_ * theta_;
  resid_ = y - Z_ * theta_;
}

void LadGibbs::refresh_weights() {
  weight_ = st_.tau / (kXi2Squared * st_.v.array());
}

NormalParams LadGibbs::column_conditional(Eigen::Index col, double prior_var, double& score) const {
  const auto z = Z_.col(col).array();
  const auto wz = weight_.array() * z;
  const double wz2 = (wz * z).sum();
  const double wzr = (wz * resid_.array()).sum();
  score = wzr + theta_[col] * wz2;  // sum_i w_i z_i (partial residual)_i
  const double var = 1.0 / (wz2 + 1.0 / prior_var);
  if (!std::isfinite(var) || !std::isfinite(score)) {
    throw GuardError("LAD sampler: non-finite conditional for coefficient " + std::to_string(col));
  }
  return {score * var, var};
}

void LadGibbs::set_coefficient(Eigen::Index col, double value) {
  const double delta = value - theta_[col];
  if (delta != 0.0) resid_.noalias() -= delta * Z_.col(col);
  theta_[col] = value;
}

NormalParams LadGibbs::alpha_conditional(std::size_t k) const {
  double s;
  return column_conditional(static_cast<Eigen::Index>(k), hp_.alpha0, s);
}

NormalParams LadGibbs::gamma_conditional(std::size_t t) const {
  double s;
  return column_conditional(static_cast<Eigen::Index>(q_ + t), hp_.gamma0, s);
}

SpikeSlabParams LadGibbs::beta_conditional() const {
  double score;
  const auto np = column_conditional(static_cast<Eigen::Index>(q_ + m_), st_.s1, score);
  SpikeSlabParams out{np.mean, np.var, 0.0};
  if (spike_) {
    const double log_bf = 0.5 * std::log(np.var / st_.s1) + 0.5 * score * score * np.var;
    out.spike_prob = spike_probability(st_.pi1, log_bf);
  }
  return out;
}

SpikeSlabParams LadGibbs::eta_conditional(std::size_t k) const {
  double score;
  const double s2k = st_.s2[static_cast<Eigen::Index>(k)];
  const auto np = column_conditional(static_cast<Eigen::Index>(q_ + m_ + 1 + k), s2k, score);
  SpikeSlabParams out{np.mean, np.var, 0.0};
  if (spike_) {
    const double log_bf = 0.5 * std::log(np.var / s2k) + 0.5 * score * score * np.var;
    out.spike_prob = spike_probability(st_.pi2, log_bf);
  }
  return out;
}

SlabScaleConditional LadGibbs::s1_conditional() const {
  SlabScaleConditional c;
  if (spike_ && !st_.beta_active) {
    c.exp_rate = st_.phi1_sq / 2.0;
    return c;
  }
  const double b = clamp_magnitude(st_.beta, kCoefficientClamp);
  c.reciprocal_ig = true;
  c.ig = {std::sqrt(st_.phi1_sq) / b, st_.phi1_sq};
  return c;
}

SlabScaleConditional LadGibbs::s2_conditional(std::size_t k) const {
  SlabScaleConditional c;
  if (spike_ && !st_.eta_active[k]) {
    c.exp_rate = st_.phi2_sq / 2.0;
    return c;
  }
  const double e = clamp_magnitude(st_.eta[static_cast<Eigen::Index>(k)], kCoefficientClamp);
  c.reciprocal_ig = true;
  c.ig = {std::sqrt(st_.phi2_sq) / e, st_.phi2_sq};
  return c;
}

GammaParams LadGibbs::phi1_conditional() const { return {hp_.c1 + 1.0, st_.s1 / 2.0 + hp_.d1}; }

GammaParams LadGibbs::phi2_conditional() const {
  return {hp_.c2 + static_cast<double>(q_), st_.s2.sum() / 2.0 + hp_.d2};
}

BetaParams LadGibbs::pi1_conditional() const {
  const double active = st_.beta_active ? 1.0 : 0.0;
  return {hp_.r1 + 1.0 - active, hp_.u1 + active};
}

BetaParams LadGibbs::pi2_conditional() const {
  double active = 0.0;
  for (char a : st_.eta_active) active += a ? 1.0 : 0.0;
  return {hp_.r2 + static_cast<double>(q_) - active, hp_.u2 + active};
}

GammaParams LadGibbs::tau_conditional() const {
  double rate = hp_.b;
  for (std::size_t i = 0; i < n_; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    rate += resid_[ii] * resid_[ii] / (2.0 * kXi2Squared * st_.v[ii]) + st_.v[ii];
  }
  if (!std::isfinite(rate)) throw GuardError("LAD sampler: non-finite tau rate");
  return {hp_.a + 1.5 * static_cast<double>(n_), rate};
}

InvGaussParams LadGibbs::v_conditional(std::size_t i) const {
  const double r = clamp_magnitude(resid_[static_cast<Eigen::Index>(i)], kResidualClamp);
  return {std::sqrt(2.0 * kXi2Squared) / r, 2.0 * st_.tau};
}

void LadGibbs::update_v(RngStream& rng) {
  const double lambda = 2.0 * st_.tau;
  const double num = std::sqrt(2.0 * kXi2Squared);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (!std::isfinite(resid_[ii])) throw GuardError("LAD sampler: non-finite residual at row " + std::to_string(i + 1));
    const double r = clamp_magnitude(resid_[ii], kResidualClamp);
    st_.v[ii] = 1.0 / sample_inverse_gaussian(num / r, lambda, rng);
  }
  refresh_weights();
}

void LadGibbs::update_tau(RngStream& rng) {
  const auto g = tau_conditional();
  st_.tau = sample_gamma(g.shape, g.rate, rng);
  refresh_weights();
}

void LadGibbs::update_alpha(RngStream& rng) {
  for (std::size_t k = 0; k < q_; ++k) {
    const auto c = alpha_conditional(k);
    const double a = sample_normal(c.mean, c.var, rng);
    set_coefficient(static_cast<Eigen::Index>(k), a);
    st_.alpha[static_cast<Eigen::Index>(k)] = a;
  }
}

void LadGibbs::update_gamma(RngStream& rng) {
  for (std::size_t t = 0; t < m_; ++t) {
    const auto c = gamma_conditional(t);
    const double g = sample_normal(c.mean, c.var, rng);
    set_coefficient(static_cast<Eigen::Index>(q_ + t), g);
    st_.gamma[static_cast<Eigen::Index>(t)] = g;
  }
}

namespace {

// Draws from a spike-and-slab conditional; returns slab membership.
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

void LadGibbs::update_beta(RngStream& rng) {
  double b;
  st_.beta_active = draw_spike_slab(beta_conditional(), spike_, rng, b);
  set_coefficient(static_cast<Eigen::Index>(q_ + m_), b);
  st_.beta = b;
}

void LadGibbs::update_eta(RngStream& rng) {
  for (std::size_t k = 0; k < q_; ++k) {
    double e;
    st_.eta_active[k] = draw_spike_slab(eta_conditional(k), spike_, rng, e) ? 1 : 0;
    set_coefficient(static_cast<Eigen::Index>(q_ + m_ + 1 + k), e);
    st_.eta[static_cast<Eigen::Index>(k)] = e;
  }
}

void LadGibbs::update_s1(RngStream& rng) { st_.s1 = draw_slab_scale(s1_conditional(), rng); }

void LadGibbs::update_s2(RngStream& rng) {
  for (std::size_t k = 0; k < q_; ++k) {
    st_.s2[static_cast<Eigen::Index>(k)] = draw_slab_scale(s2_conditional(k), rng);
  }
}

void LadGibbs::update_phi_sq(RngStream& rng) {
  const auto g1 = phi1_conditional();
  st_.phi1_sq = sample_gamma(g1.shape, g1.rate, rng);
  const auto g2 = phi2_conditional();
  st_.phi2_sq = sample_gamma(g2.shape, g2.rate, rng);
}

void LadGibbs::update_pi(RngStream& rng) {
  if (!spike_) return;
  const auto b1 = pi1_conditional();
  st_.pi1 = sample_beta(b1.a, b1.b, rng);
  const auto b2 = pi2_conditional();
  st_.pi2 = sample_beta(b2.a, b2.b, rng);
}

void LadGibbs::sweep(RngStream& rng, std::uint32_t frozen) {
  if (++sweeps_ % 64 == 0) recompute_residual();
  auto live = [frozen](Block b) { return (frozen & b) == 0; };
  if (live(kLatent)) update_v(rng);
  if (live(kScale)) update_tau(rng);
  if (live(kAlpha)) update_alpha(rng);
  if (live(kGamma)) update_gamma(rng);
  if (live(kBeta)) update_beta(rng);
  if (live(kEta)) update_eta(rng);
  if (live(kSlabScale)) {
    update_s1(rng);
    update_s2(rng);
  }
  if (live(kRate)) update_phi_sq(rng);
  if (live(kMix)) update_pi(rng);
  if (!std::isfinite(st_.tau) || !(st_.tau > 0.0) || !std::isfinite(st_.beta) || !std::isfinite(st_.s1) ||
      !std::isfinite(st_.phi1_sq) || !std::isfinite(st_.phi2_sq)) {
    throw GuardError("LAD sampler: state left the support");
  }
}

}  // namespace robgxe
