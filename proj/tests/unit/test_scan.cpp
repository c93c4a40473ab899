#include <doctest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "robgxe/errors.hpp"
#include "robgxe/samplers.hpp"
#include "robgxe/scan.hpp"
#include "robgxe/simulate.hpp"

using namespace robgxe;

namespace {

Dataset simulated(std::size_t n, std::size_t p, std::uint64_t seed, bool null_model = false) {
  SimConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.n_true_main = std::min<std::size_t>(cfg.n_true_main, p);
  cfg.n_true_int = std::min<std::size_t>(cfg.n_true_int, p * cfg.q);
  cfg.null_model = null_model;
  auto rng = simulation_stream(seed, 0);
  return simulate_dataset(cfg, rng);
}

GibbsConfig quick(std::size_t iters = 400, std::size_t burn = 200) {
  GibbsConfig cfg;
  cfg.n_iter = iters;
  cfg.burn_in = burn;
  cfg.keep_draws = false;
  return cfg;
}

// OLS t-test p-values of the gene-linked coefficients from the normal equations.
std::vector<double> oracle_pvalues(const Dataset& d, std::size_t j) {
  const auto n = static_cast<Eigen::Index>(d.n()), q = static_cast<Eigen::Index>(d.q()),
             m = static_cast<Eigen::Index>(d.m());
  Matrix Z(n, 2 + 2 * q + m);
  Z.col(0).setOnes();
  Z.middleCols(1, q) = d.E;
  Z.middleCols(1 + q, m) = d.C;
  const Vector x = d.X.col(static_cast<Eigen::Index>(j));
  Z.col(1 + q + m) = x;
  for (Eigen::Index k = 0; k < q; ++k) Z.col(2 + q + m + k) = d.E.col(k).cwiseProduct(x);
  const Matrix inv = (Z.transpose() * Z).inverse();
  const Vector b = inv * Z.transpose() * d.y;
  const double df = static_cast<double>(n - Z.cols());
  const double s2 = (d.y - Z * b).squaredNorm() / df;
  boost::math::students_t t(df);
  std::vector<double> out;
  for (Eigen::Index c = 1 + q + m; c < Z.cols(); ++c) {
    out.push_back(2.0 * boost::math::cdf(boost::math::complement(t, std::abs(b[c]) / std::sqrt(s2 * inv(c, c)))));
  }
  return out;
}

}  // namespace

TEST_SUITE("scan") {
  TEST_CASE("a one-gene scan is one run_chain on stream (seed, 0, 0, 0)") {
    auto data = simulated(60, 20, 1);
    data.X = data.X.leftCols(1).eval();
    data.truth.reset();
    for (auto method : {MethodId::LADBLSS, MethodId::BL}) {
      const auto cfg = quick();
      const auto scan = marginal_scan(data, method, Hyperparameters{}, cfg, 77);
      REQUIRE(scan.genes.size() == 1);
      const auto work = standardize(data, is_robust(method) ? ResponseCentre::Median : ResponseCentre::Mean);
      RngStream rng(77, {0, 0, 0});
      const auto direct = run_chain(build_marginal_design(work, 0), method, Hyperparameters{}, cfg, rng);
      for (std::size_t e = 0; e < direct.effects.size(); ++e) {
        CHECK(scan.genes[0].effects[e].median == direct.effects[e].median);
        CHECK(scan.genes[0].effects[e].credible_score == direct.effects[e].credible_score);
      }
    }
  }

  TEST_CASE("thread count does not change the output") {
    const auto data = simulated(50, 12, 2);
    std::vector<std::vector<double>> runs;
    for (std::size_t threads : {1, 3, 5}) {
      ScanOptions opts;
      opts.threads = threads;
      opts.replicate = 4;
      const auto r = marginal_scan(data, MethodId::LADBLSS, Hyperparameters{}, quick(), 5, opts);
      std::vector<double> flat;
      for (const auto& g : r.genes) {
        for (const auto& e : g.effects) {
          flat.push_back(e.median);
          flat.push_back(e.score());
        }
      }
      runs.push_back(flat);
    }
    CHECK(runs[0] == runs[1]);
    CHECK(runs[0] == runs[2]);
  }

  TEST_CASE("replicate index selects a different stream") {
    const auto data = simulated(50, 4, 3);
    ScanOptions a, b;
    b.replicate = 1;
    const auto ra = marginal_scan(data, MethodId::BLSS, Hyperparameters{}, quick(), 5, a);
    const auto rb = marginal_scan(data, MethodId::BLSS, Hyperparameters{}, quick(), 5, b);
    CHECK(ra.genes[0].alpha(0).median != rb.genes[0].alpha(0).median);
  }

  TEST_CASE("progress and failure accounting") {
    auto data = simulated(40, 6, 4);
    data.X.col(2) *= 1e200;  // overflows the sampler without standardizing
    ScanOptions opts;
    opts.standardize = false;
    std::size_t calls = 0, last = 0;
    opts.progress = [&](std::size_t done, std::size_t total) {
      ++calls;
      last = done;
      CHECK(total == 6);
    };
    const auto r = marginal_scan(data, MethodId::LADBLSS, Hyperparameters{}, quick(), 1, opts);
    CHECK(calls == 6);
    CHECK(last == 6);
    CHECK(r.failures == 1);
    CHECK(r.failed);  // 1 of 6 is above 1%
    CHECK_FALSE(r.genes[2].ok);
    CHECK(r.error_summary.find("gene 3") != std::string::npos);
    CHECK(r.genes[1].ok);

    opts.standardize = true;
    const auto fine = marginal_scan(data, MethodId::LADBLSS, Hyperparameters{}, quick(), 1, opts);
    CHECK(fine.failures == 0);
    CHECK_FALSE(fine.failed);
  }

  TEST_CASE("marginal p-values match the normal equations") {
    const auto data = simulated(80, 5, 5);
    for (std::size_t j = 0; j < 5; ++j) {
      const auto got = marginal_pvalues(data, j);
      const auto want = oracle_pvalues(data, j);
      REQUIRE(got.size() == 5);
      for (std::size_t k = 0; k < 5; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-8));
    }
  }

  TEST_CASE("prescreen exclusion rate for null genes") {
    // Five independent null p-values: P(fewer than 2 below 0.05).
    const double expected = boost::math::cdf(boost::math::binomial(5, 0.05), 1.0);
    CHECK(expected == doctest::Approx(0.977).epsilon(0.001));
    const std::size_t p = 3000;
    auto data = simulated(200, p, 6, true);
    RngStream rng(6);
    for (auto& v : data.X.reshaped()) v = rng.standard_normal();  // independent genes
    const auto r = prescreen(data, 0.05, 2);
    const double excluded = 1.0 - static_cast<double>(r.kept.size()) / static_cast<double>(p);
    const double sd = std::sqrt(expected * (1.0 - expected) / static_cast<double>(p));
    CHECK(std::abs(excluded - expected) < 4.0 * sd);
  }

  TEST_CASE("prescreen keeps a strong gene and every gene at min_hits 0") {
    int kept = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto data = simulated(200, 3, 100 + s, true);
      RngStream rng(s);
      data.y = data.X.col(1);
      for (auto& y : data.y) y += rng.standard_normal();
      const auto r = prescreen(data, 0.05, 1);
      kept += std::find(r.kept.begin(), r.kept.end(), 1) != r.kept.end() ? 1 : 0;
    }
    CHECK(kept == 20);

    auto data = simulated(60, 8, 7);
    data.X.col(4).setConstant(1.0);  // collinear with the intercept
    const auto all = prescreen(data, 0.05, 0);
    CHECK(all.kept.size() == 7);
    CHECK(std::find(all.kept.begin(), all.kept.end(), 4) == all.kept.end());
    REQUIRE(all.warnings.size() == 1);
    CHECK(all.warnings[0].find("gene 5") != std::string::npos);
    CHECK_THROWS_AS(prescreen(data, 0.0, 1), ConfigError);
  }
}
