#include "robgxe/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "robgxe/errors.hpp"
#include "robgxe/samplers.hpp"

namespace robgxe {

ScanResult marginal_scan(const Dataset& data, MethodId method, const Hyperparameters& hp,
                         const GibbsConfig& cfg, std::uint64_t seed, const ScanOptions& opts) {
  data.validate();
  hp.validate();
  cfg.validate();
  const Dataset work =
      opts.standardize ? standardize(data, is_robust(method) ? ResponseCentre::Median : ResponseCentre::Mean)
                       : data;
  const std::size_t p = work.p();

  ScanResult out;
  out.genes.resize(p);
  std::atomic<std::size_t> next{0}, done{0};
  std::mutex progress_mu;

  auto worker = [&] {
    for (std::size_t j = next.fetch_add(1); j < p; j = next.fetch_add(1)) {
      PosteriorSummary& s = out.genes[j];
      try {
        const auto design = build_marginal_design(work, j);
        RngStream rng(seed, {opts.replicate, j, 0});
        s = run_chain(design, method, hp, cfg, rng);
      } catch (const Error& e) {
        s = PosteriorSummary{};
        s.method = method;
        s.gene = j;
        s.q = work.q();
        s.m = work.m();
        s.ok = false;
        s.error = e.what();
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (opts.progress) {
        std::lock_guard lock(progress_mu);
        opts.progress(finished, p);
      }
    }
  };

  std::size_t threads = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(p, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (const auto& s : out.genes) {
    if (s.ok) continue;
    if (out.failures < 5) out.error_summary += "gene " + std::to_string(s.gene + 1) + ": " + s.error + "\n";
    ++out.failures;
  }
  if (out.failures * 100 > p) {
    out.failed = true;
    out.error_summary = std::to_string(out.failures) + " of " + std::to_string(p) +
                        " genes failed (more than 1%)\n" + out.error_summary;
  }
  return out;
}

std::vector<double> marginal_pvalues(const Dataset& data, std::size_t gene) {
  const auto d = build_marginal_design(data, gene);
  const auto n = static_cast<Eigen::Index>(d.n());
  const auto q = static_cast<Eigen::Index>(d.q());
  const auto m = static_cast<Eigen::Index>(d.m());
  const Eigen::Index k = 1 + q + m + 1 + q;
  if (n <= k) throw ConfigError("prescreen needs n > 2q + m + 2");
  Matrix Z(n, k);
  Z.col(0).setOnes();
  Z.middleCols(1, q) = d.E;
  Z.middleCols(1 + q, m) = d.C;
  Z.col(1 + q + m) = d.x;
  Z.rightCols(q) = d.w;

  Eigen::ColPivHouseholderQR<Matrix> qr(Z);
  if (qr.rank() < k) {
    throw DegenerateError("gene " + std::to_string(gene + 1) + ": rank-deficient marginal design");
  }
  const Vector coef = qr.solve(d.y);
  const Vector resid = d.y - Z * coef;
  const double df = static_cast<double>(n - k);
  const double s2 = resid.squaredNorm() / df;
  // diag((Z'Z)^{-1}) via the triangular factor: (Z'Z)^{-1} = P R^{-1} R^{-T} P'
  const Matrix R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Matrix Rinv = R.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Vector diag_perm = Rinv.rowwise().squaredNorm();
  Vector diag(k);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index i = 0; i < k; ++i) diag[perm[i]] = diag_perm[i];

  boost::math::students_t tdist(df);
  std::vector<double> pv;
  for (Eigen::Index c = 1 + q + m; c < k; ++c) {
    const double se = std::sqrt(s2 * diag[c]);
    const double t = se > 0.0 ? std::abs(coef[c] / se) : INFINITY;
    pv.push_back(std::isfinite(t) ? 2.0 * boost::math::cdf(boost::math::complement(tdist, t)) : 0.0);
  }
  return pv;
}

PrescreenResult prescreen(const Dataset& data, double p_threshold, std::size_t min_hits) {
  data.validate();
  if (!(p_threshold > 0.0 && p_threshold <= 1.0)) throw ConfigError("p-value threshold must lie in (0, 1]");
  PrescreenResult out;
  for (std::size_t j = 0; j < data.p(); ++j) {
    std::vector<double> pv;
    try {
      pv = marginal_pvalues(data, j);
    } catch (const DegenerateError& e) {
      out.warnings.push_back(e.what());
      continue;
    }
    const auto hits = static_cast<std::size_t>(
        std::count_if(pv.begin(), pv.end(), [&](double x) { return x < p_threshold; }));
    if (hits >= min_hits) out.kept.push_back(j);
  }
  return out;
}

}  // namespace robgxe
