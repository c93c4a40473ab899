#include "robgxe/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "robgxe/errors.hpp"
#include "robgxe/summary.hpp"

namespace robgxe {

GenotypeSetting setting_from_index(int index) {
  switch (index) {
    case 1: return GenotypeSetting::Expression;
    case 2: return GenotypeSetting::SNPQuartile;
    case 3: return GenotypeSetting::SNPLD;
    default: throw ConfigError("setting must be 1, 2 or 3 (got " + std::to_string(index) + ")");
  }
}

int setting_index(GenotypeSetting s) { return static_cast<int>(s) + 1; }

void SimConfig::validate() const {
  if (n < 4) throw ConfigError("simulation needs n >= 4");
  if (p == 0 || q == 0) throw ConfigError("simulation needs p >= 1 and q >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)");
  if (!(maf > 0.0 && maf < 0.5)) throw ConfigError("maf must lie in (0, 0.5)");
  if (!(ld_r >= -1.0 && ld_r <= 1.0)) throw ConfigError("ld_r must lie in [-1, 1]");
  if (n_true_main > p) throw ConfigError("more true main effects than genes");
  if (n_true_int > p * q) throw ConfigError("more true interactions than gene-environment pairs");
}

Matrix simulate_ar1(std::size_t n, std::size_t cols, double rho, RngStream& rng) {
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  const double innov = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    double prev = 0.0;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const double z = rng.standard_normal();
      prev = j == 0 ? z : rho * prev + innov * z;
      out(i, j) = prev;
    }
  }
  return out;
}

Matrix simulate_gene_expression(const SimConfig& cfg, RngStream& rng) {
  cfg.validate();
  return simulate_ar1(cfg.n, cfg.p, cfg.rho, rng);
}

Matrix dichotomize_to_snp(const Matrix& expr) {
  if (expr.rows() < 4) throw ConfigError("dichotomize_to_snp needs at least 4 rows");
  Matrix out(expr.rows(), expr.cols());
  std::vector<double> sorted(static_cast<std::size_t>(expr.rows()));
  for (Eigen::Index j = 0; j < expr.cols(); ++j) {
    auto col = expr.col(j);
    std::copy(col.begin(), col.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
      throw DegenerateError("dichotomize_to_snp: column " + std::to_string(j + 1) + " is constant");
    }
    const double q1 = quantile_sorted(sorted, 0.25);
    const double q3 = quantile_sorted(sorted, 0.75);
    for (Eigen::Index i = 0; i < expr.rows(); ++i) {
      const double x = col[i];
      out(i, j) = x < q1 ? 0.0 : (x > q3 ? 2.0 : 1.0);
    }
  }
  return out;
}

HaplotypeFreqs haplotype_frequencies(double q1, double q2, double r) {
  HaplotypeFreqs h;
  h.delta = r * std::sqrt(q1 * (1.0 - q1) * q2 * (1.0 - q2));
  h.AB = q1 * q2 + h.delta;
  h.ab = (1.0 - q1) * (1.0 - q2) + h.delta;
  h.Ab = q1 * (1.0 - q2) - h.delta;
  h.aB = (1.0 - q1) * q2 - h.delta;
  for (double f : {h.AB, h.ab, h.Ab, h.aB}) {
    if (!(f > 0.0 && f < 1.0)) {
      throw ConfigError("LD coefficient pushes a haplotype frequency outside (0, 1)");
    }
  }
  return h;
}

GenotypeTransition genotype_transition(const HaplotypeFreqs& h) {
  // haplotype -> (count of A, count of B)
  const double freq[4] = {h.AB, h.Ab, h.aB, h.ab};
  const int a[4] = {1, 1, 0, 0};
  const int b[4] = {1, 0, 1, 0};
  GenotypeTransition t{};
  for (int h1 = 0; h1 < 4; ++h1) {
    for (int h2 = 0; h2 < 4; ++h2) t[a[h1] + a[h2]][b[h1] + b[h2]] += freq[h1] * freq[h2];
  }
  for (auto& row : t) {
    const double total = row[0] + row[1] + row[2];
    for (double& x : row) x /= total;
  }
  return t;
}

namespace {

int draw_category(const std::array<double, 3>& probs, RngStream& rng) {
  const double u = rng.uniform();
  if (u < probs[0]) return 0;
  if (u < probs[0] + probs[1]) return 1;
  return 2;
}

std::size_t uniform_index(std::size_t k, RngStream& rng) {
  const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(k));
  return std::min(i, k - 1);
}

// First `count` entries of a Fisher-Yates shuffle of 0..total-1, sorted.
std::vector<std::size_t> choose_positions(std::size_t total, std::size_t count, RngStream& rng) {
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[i + uniform_index(total - i, rng)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Matrix simulate_ld_snps(const SimConfig& cfg, RngStream& rng) {
  cfg.validate();
  const auto hap = haplotype_frequencies(cfg.maf, cfg.maf, cfg.ld_r);
  const auto trans = genotype_transition(hap);
  const double qa = cfg.maf;
  const std::array<double, 3> first{(1.0 - qa) * (1.0 - qa), 2.0 * qa * (1.0 - qa), qa * qa};
  Matrix out(static_cast<Eigen::Index>(cfg.n), static_cast<Eigen::Index>(cfg.p));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    int g = draw_category(first, rng);
    out(i, 0) = g;
    for (Eigen::Index j = 1; j < out.cols(); ++j) {
      g = draw_category(trans[static_cast<std::size_t>(g)], rng);
      out(i, j) = g;
    }
  }
  return out;
}

Matrix simulate_genotypes(const SimConfig& cfg, RngStream& rng) {
  switch (cfg.setting) {
    case GenotypeSetting::Expression: return simulate_gene_expression(cfg, rng);
    case GenotypeSetting::SNPQuartile: return dichotomize_to_snp(simulate_gene_expression(cfg, rng));
    case GenotypeSetting::SNPLD: return simulate_ld_snps(cfg, rng);
  }
  throw ConfigError("unknown genotype setting");
}

Dataset simulate_dataset(const SimConfig& cfg, RngStream& rng) {
  cfg.validate();
  Dataset d;
  d.E = simulate_ar1(cfg.n, cfg.q, 0.5, rng);
  d.C = simulate_ar1(cfg.n, cfg.m, 0.5, rng);
  d.X = simulate_genotypes(cfg, rng);

  auto coef = [&] { return cfg.null_model ? 0.0 : 0.1 + 0.4 * rng.uniform(); };
  GroundTruth t;
  t.main_idx = choose_positions(cfg.p, cfg.n_true_main, rng);
  for (std::size_t i = 0; i < t.main_idx.size(); ++i) t.main_value.push_back(coef());
  for (std::size_t pos : choose_positions(cfg.p * cfg.q, cfg.n_true_int, rng)) {
    t.int_idx.push_back({pos / cfg.q, pos % cfg.q});
    t.int_value.push_back(coef());
  }
  for (std::size_t k = 0; k < cfg.q; ++k) t.alpha.push_back(coef());
  for (std::size_t s = 0; s < cfg.m; ++s) t.gamma.push_back(coef());

  const auto eps = sample_error(cfg.error, cfg.n, rng);
  d.y = Eigen::Map<const Vector>(eps.data(), static_cast<Eigen::Index>(eps.size()));
  for (std::size_t k = 0; k < cfg.q; ++k) d.y += t.alpha[k] * d.E.col(static_cast<Eigen::Index>(k));
  for (std::size_t s = 0; s < cfg.m; ++s) d.y += t.gamma[s] * d.C.col(static_cast<Eigen::Index>(s));
  for (std::size_t i = 0; i < t.main_idx.size(); ++i) {
    d.y += t.main_value[i] * d.X.col(static_cast<Eigen::Index>(t.main_idx[i]));
  }
  for (std::size_t i = 0; i < t.int_idx.size(); ++i) {
    const auto [g, k] = t.int_idx[i];
    d.y.array() += t.int_value[i] * d.X.col(static_cast<Eigen::Index>(g)).array() *
                   d.E.col(static_cast<Eigen::Index>(k)).array();
  }
  t.validate(cfg.p, cfg.q);
  d.truth = std::move(t);
  return d;
}

}  // namespace robgxe
