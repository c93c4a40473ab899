#include "robgxe/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "robgxe/distributions.hpp"
#include "robgxe/errors.hpp"
#include "robgxe/format.hpp"
#include "robgxe/summary.hpp"

namespace robgxe {

bool GroundTruth::is_true_main(std::size_t gene) const {
  return std::find(main_idx.begin(), main_idx.end(), gene) != main_idx.end();
}

bool GroundTruth::is_true_interaction(std::size_t gene, std::size_t env) const {
  return std::find(int_idx.begin(), int_idx.end(), GeneEnvPair{gene, env}) != int_idx.end();
}

void GroundTruth::validate(std::size_t p, std::size_t q) const {
  if (main_value.size() != main_idx.size() || int_value.size() != int_idx.size()) {
    throw ConfigError("ground truth: index and value lists differ in length");
  }
  std::set<std::size_t> mains;
  for (auto j : main_idx) {
    if (j >= p) throw ConfigError("ground truth: main index out of range");
    if (!mains.insert(j).second) throw ConfigError("ground truth: duplicate main index");
  }
  std::set<GeneEnvPair> ints;
  for (const auto& pr : int_idx) {
    if (pr.gene >= p || pr.env >= q) throw ConfigError("ground truth: interaction index out of range");
    if (!ints.insert(pr).second) throw ConfigError("ground truth: duplicate interaction");
  }
}

void Dataset::validate() const {
  const auto rows = y.size();
  if (E.rows() != rows || C.rows() != rows || X.rows() != rows) {
    throw ConfigError("dataset: y, E, C and X must have the same number of rows");
  }
  if (n() < q() + m() + 2) {
    throw ConfigError("dataset: need n >= q + m + 2 for an estimable marginal model");
  }
  if (!y.allFinite() || !E.allFinite() || !C.allFinite() || !X.allFinite()) {
    throw ConfigError("dataset: non-finite entries");
  }
  if (truth) truth->validate(p(), q());
}

namespace {

void standardize_columns(Matrix& M) {
  const double n = static_cast<double>(M.rows());
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    auto col = M.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / (n - 1.0));
    if (sd > 1e-12) col /= sd;
    else col.setZero();
  }
}

}  // namespace

Dataset standardize(const Dataset& data, ResponseCentre centre) {
  Dataset out = data;
  if (centre == ResponseCentre::Median) {
    out.y.array() -= median(std::span<const double>(out.y.data(), static_cast<std::size_t>(out.y.size())));
  } else {
    out.y.array() -= out.y.mean();
  }
  standardize_columns(out.E);
  standardize_columns(out.C);
  standardize_columns(out.X);
  return out;
}

MarginalDesign build_marginal_design(const Dataset& data, std::size_t gene) {
  if (gene >= data.p()) {
    throw ConfigError("gene index " + std::to_string(gene) + " out of range (p = " +
                      std::to_string(data.p()) + ")");
  }
  MarginalDesign d;
  d.gene = gene;
  d.y = data.y;
  d.E = data.E;
  d.C = data.C;
  d.x = data.X.col(static_cast<Eigen::Index>(gene));
  d.w = data.E.array().colwise() * d.x.array();
  return d;
}

namespace {

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ConfigError(std::string("hyperparameter ") + name + " must be finite and > 0");
  }
}

}  // namespace

void Hyperparameters::validate() const {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(c1, "c1");
  require_positive(d1, "d1");
  require_positive(c2, "c2");
  require_positive(d2, "d2");
  require_positive(r1, "r1");
  require_positive(u1, "u1");
  require_positive(r2, "r2");
  require_positive(u2, "u2");
  require_positive(alpha0, "alpha0");
  require_positive(gamma0, "gamma0");
  const auto& g = gauss;
  require_positive(g.r_c, "r_c");
  require_positive(g.u_c, "u_c");
  require_positive(g.r_e, "r_e");
  require_positive(g.u_e, "u_e");
  require_positive(g.a_c, "a_c");
  require_positive(g.b_c, "b_c");
  require_positive(g.a_e, "a_e");
  require_positive(g.b_e, "b_e");
  require_positive(g.s, "s");
  require_positive(g.h, "h");
  if (g.sigma_alpha0.empty() || g.sigma_gamma0.empty()) {
    throw ConfigError("prior covariance diagonals must not be empty");
  }
  for (double x : g.sigma_alpha0) require_positive(x, "sigma_alpha0");
  for (double x : g.sigma_gamma0) require_positive(x, "sigma_gamma0");
}

namespace {

double broadcast(const std::vector<double>& diag, std::size_t i, const char* name) {
  if (diag.size() == 1) return diag.front();
  if (i >= diag.size()) throw ConfigError(std::string(name) + " has fewer entries than coefficients");
  return diag[i];
}

}  // namespace

double Hyperparameters::gauss_alpha_var(std::size_t k) const {
  return broadcast(gauss.sigma_alpha0, k, "sigma_alpha0");
}

double Hyperparameters::gauss_gamma_var(std::size_t t) const {
  return broadcast(gauss.sigma_gamma0, t, "sigma_gamma0");
}

bool ChainState::valid() const {
  auto pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  auto prob = [](double x) { return x >= 0.0 && x <= 1.0; };
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!pos(v[i])) return false;
  }
  for (Eigen::Index k = 0; k < s2.size(); ++k) {
    if (!pos(s2[k])) return false;
  }
  return pos(s1) && pos(tau) && pos(phi1_sq) && pos(phi2_sq) && pos(sigma2) && prob(pi1) &&
         prob(pi2) && alpha.allFinite() && gamma.allFinite() && eta.allFinite() &&
         std::isfinite(beta) && static_cast<Eigen::Index>(eta_active.size()) == eta.size();
}

namespace {

void write_vec(std::ostream& os, const char* key, const Vector& v) {
  os << key << " =";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << format_double(v[i]);
  os << '\n';
}

void write_scalar(std::ostream& os, const char* key, double x) {
  os << key << " = " << format_double(x) << '\n';
}

std::vector<double> read_values(const std::string& rest, const std::string& key) {
  std::istringstream is(rest);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    double x;
    if (!parse_double(tok, x)) throw ConfigError("chain state: bad value for " + key + ": " + tok);
    out.push_back(x);
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double to_scalar(const std::vector<double>& v, const std::string& key) {
  if (v.size() != 1) throw ConfigError("chain state: " + key + " expects one value");
  return v.front();
}

}  // namespace

std::string ChainState::serialize() const {
  std::ostringstream os;
  write_vec(os, "alpha", alpha);
  write_vec(os, "gamma", gamma);
  write_scalar(os, "beta", beta);
  write_vec(os, "eta", eta);
  write_scalar(os, "beta_active", beta_active ? 1.0 : 0.0);
  Vector ea(static_cast<Eigen::Index>(eta_active.size()));
  for (std::size_t k = 0; k < eta_active.size(); ++k) ea[static_cast<Eigen::Index>(k)] = eta_active[k] ? 1.0 : 0.0;
  write_vec(os, "eta_active", ea);
  write_vec(os, "v", v);
  write_scalar(os, "s1", s1);
  write_vec(os, "s2", s2);
  write_scalar(os, "tau", tau);
  write_scalar(os, "phi1_sq", phi1_sq);
  write_scalar(os, "phi2_sq", phi2_sq);
  write_scalar(os, "pi1", pi1);
  write_scalar(os, "pi2", pi2);
  write_scalar(os, "sigma2", sigma2);
  return os.str();
}

ChainState ChainState::deserialize(const std::string& text) {
  ChainState st;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("chain state: missing '=' in: " + line);
    std::string key = line.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    const auto vals = read_values(line.substr(eq + 1), key);
    if (key == "alpha") st.alpha = to_vector(vals);
    else if (key == "gamma") st.gamma = to_vector(vals);
    else if (key == "beta") st.beta = to_scalar(vals, key);
    else if (key == "eta") st.eta = to_vector(vals);
    else if (key == "beta_active") st.beta_active = to_scalar(vals, key) != 0.0;
    else if (key == "eta_active") {
      st.eta_active.clear();
      for (double x : vals) st.eta_active.push_back(x != 0.0 ? 1 : 0);
    } else if (key == "v") st.v = to_vector(vals);
    else if (key == "s1") st.s1 = to_scalar(vals, key);
    else if (key == "s2") st.s2 = to_vector(vals);
    else if (key == "tau") st.tau = to_scalar(vals, key);
    else if (key == "phi1_sq") st.phi1_sq = to_scalar(vals, key);
    else if (key == "phi2_sq") st.phi2_sq = to_scalar(vals, key);
    else if (key == "pi1") st.pi1 = to_scalar(vals, key);
    else if (key == "pi2") st.pi2 = to_scalar(vals, key);
    else if (key == "sigma2") st.sigma2 = to_scalar(vals, key);
    else throw ConfigError("chain state: unknown key " + key);
  }
  return st;
}

bool operator==(const ChainState& a, const ChainState& b) {
  auto same = [](const Vector& x, const Vector& y) { return x.size() == y.size() && x == y; };
  return same(a.alpha, b.alpha) && same(a.gamma, b.gamma) && a.beta == b.beta && same(a.eta, b.eta) &&
         a.beta_active == b.beta_active && a.eta_active == b.eta_active && same(a.v, b.v) &&
         a.s1 == b.s1 && same(a.s2, b.s2) && a.tau == b.tau && a.phi1_sq == b.phi1_sq &&
         a.phi2_sq == b.phi2_sq && a.pi1 == b.pi1 && a.pi2 == b.pi2 && a.sigma2 == b.sigma2;
}

ChainState init_chain(const MarginalDesign& design, const Hyperparameters& hp, RngStream& rng,
                      InitMode mode) {
  (void)hp;
  const auto n = static_cast<Eigen::Index>(design.n());
  const auto q = static_cast<Eigen::Index>(design.q());
  const auto m = static_cast<Eigen::Index>(design.m());
  ChainState st;
  st.alpha = Vector::Zero(q);
  st.gamma = Vector::Zero(m);
  st.eta = Vector::Zero(q);
  st.eta_active.assign(static_cast<std::size_t>(q), 0);
  st.v = Vector::Ones(n);
  st.s2 = Vector::Ones(q);
  if (mode == InitMode::Overdispersed) {
    for (auto& a : st.alpha) a = sample_normal(0.0, 4.0, rng);
    for (auto& g : st.gamma) g = sample_normal(0.0, 4.0, rng);
    st.beta = sample_normal(0.0, 4.0, rng);
    st.beta_active = true;
    for (Eigen::Index k = 0; k < q; ++k) {
      st.eta[k] = sample_normal(0.0, 4.0, rng);
      st.eta_active[static_cast<std::size_t>(k)] = 1;
    }
  }
  return st;
}

}  // namespace robgxe
