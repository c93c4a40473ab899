// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Arguments select criteria ("1 3 7"); default all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../conjugacy.hpp"
#include "robgxe/cli.hpp"
#include "robgxe/diagnostics.hpp"
#include "robgxe/evaluate.hpp"
#include "robgxe/io.hpp"
#include "robgxe/samplers.hpp"
#include "robgxe/scan.hpp"
#include "robgxe/simulate.hpp"

using namespace robgxe;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::size_t kReplicates = 10;
constexpr std::size_t kDeskP = 100;

struct Outcome {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

void report(std::string id, bool pass, const std::string& detail) {
  std::printf("criterion %-3s %s  %s\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  g_outcomes.push_back({std::move(id), pass, detail});
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void progress(const std::string& what) {
  std::fprintf(stderr, "[acceptance] %s\n", what.c_str());
  std::fflush(stderr);
}

GibbsConfig standard_config() {
  GibbsConfig cfg;
  cfg.n_iter = 10000;
  cfg.burn_in = 5000;
  cfg.keep_draws = false;
  return cfg;
}

Dataset desk_dataset(GenotypeSetting setting, int error, std::size_t replicate) {
  SimConfig cfg;
  cfg.n = 200;
  cfg.p = kDeskP;
  cfg.setting = setting;
  cfg.error = ErrorLaw::from_index(error);
  cfg.seed = kSeed;
  auto rng = simulation_stream(kSeed, replicate);
  return simulate_dataset(cfg, rng);
}

std::vector<EffectScore> desk_scan(const Dataset& data, MethodId method, std::size_t replicate) {
  ScanOptions opts;
  opts.replicate = replicate;
  opts.threads = 0;
  const auto r = marginal_scan(data, method, Hyperparameters{}, standard_config(), kSeed, opts);
  if (r.failed) throw std::runtime_error("scan failed: " + r.error_summary);
  return effect_scores(r.genes);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = Clock::now();
  const auto results = conjugacy::conjugacy_suite(100000, kSeed);
  const auto worst = std::max_element(results.begin(), results.end(),
                                      [](const auto& a, const auto& b) { return a.d < b.d; });
  std::size_t failing = 0;
  for (const auto& r : results) failing += r.d < 0.01 ? 0 : 1;
  report("1", failing == 0,
         std::to_string(results.size()) + " full conditionals, 1e5 draws each; max KS D = " + fmt(worst->d) +
             " (" + worst->name + "), bound 0.01; " + std::to_string(failing) + " above bound; " +
             fmt(seconds_since(t0), 1) + " s");
}

// BLSS on n = 20, p = 1, q = 1, m = 0: every block except beta is pinned at its
// posterior mean from a pilot chain; beta's posterior mean from 1e5 sweeps is
// compared with numerical integration of the same conditional posterior.
void criterion2() {
  RngStream data_rng(kSeed, {0, 0, 7});
  const Eigen::Index n = 20;
  MarginalDesign d;
  d.E.resize(n, 1);
  d.C.resize(n, 0);
  d.x.resize(n);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.E(i, 0) = data_rng.standard_normal();
    d.x[i] = data_rng.standard_normal();
  }
  d.w = d.E.array().colwise() * d.x.array();
  for (Eigen::Index i = 0; i < n; ++i) d.y[i] = 0.3 * d.E(i, 0) + 0.5 * d.x[i] + data_rng.standard_normal();

  Hyperparameters hp;
  RngStream rng(kSeed, {0, 0, 8});
  GaussGibbs pilot(d, hp, true, init_chain(d, hp, rng));
  ChainState mean = pilot.state();
  mean.alpha.setZero();
  mean.eta.setZero();
  mean.s1 = mean.phi1_sq = mean.phi2_sq = mean.pi1 = mean.pi2 = mean.sigma2 = 0.0;
  mean.s2.setZero();
  double eta_incl = 0.0;
  const int burn = 5000, keep = 20000;
  for (int it = 0; it < burn + keep; ++it) {
    pilot.sweep(rng);
    if (it < burn) continue;
    const auto& s = pilot.state();
    mean.alpha += s.alpha / keep;
    mean.eta += s.eta / keep;
    mean.s1 += s.s1 / keep;
    mean.s2 += s.s2 / keep;
    mean.phi1_sq += s.phi1_sq / keep;
    mean.phi2_sq += s.phi2_sq / keep;
    mean.pi1 += s.pi1 / keep;
    mean.pi2 += s.pi2 / keep;
    mean.sigma2 += s.sigma2 / keep;
    eta_incl += (s.eta_active[0] ? 1.0 : 0.0) / keep;
  }
  mean.eta_active = {static_cast<char>(eta_incl > 0.5 ? 1 : 0)};
  if (!mean.eta_active[0]) mean.eta.setZero();
  mean.beta = 0.0;
  mean.beta_active = false;

  GaussGibbs chain(d, hp, true, mean);
  const std::uint32_t all_but_beta = ~static_cast<std::uint32_t>(kBeta);
  double mc = 0.0;
  const int draws = 100000;
  for (int it = 0; it < draws; ++it) {
    chain.sweep(rng, all_but_beta);
    mc += chain.state().beta / draws;
  }

  // Grid: beta ~ pi delta_0 + (1 - pi) N(0, sigma2 tau2), Gaussian likelihood.
  const Vector r = d.y - d.E * mean.alpha - d.w * mean.eta;
  const double s2 = mean.sigma2, prior_var = s2 * mean.s1, pi = mean.pi1;
  auto log_lik_ratio = [&](double b) { return -0.5 * ((r - b * d.x).squaredNorm() - r.squaredNorm()) / s2; };
  const double lo = -6.0, hi = 6.0, h = 1e-5;
  double z = 0.0, zb = 0.0;
  for (double b = lo; b <= hi; b += h) {
    const double wgt = (b == lo || b + h > hi) ? 0.5 : 1.0;
    const double dens = std::exp(log_lik_ratio(b) - 0.5 * b * b / prior_var) / std::sqrt(2.0 * M_PI * prior_var);
    z += wgt * dens * h;
    zb += wgt * b * dens * h;
  }
  const double slab_weight = (1.0 - pi) * z / (pi + (1.0 - pi) * z);
  const double grid = slab_weight * zb / z;
  const double diff = std::abs(mc - grid);
  report("2", diff <= 0.05,
         "posterior mean of beta: chain " + fmt(mc) + ", grid " + fmt(grid) + ", |diff| = " + fmt(diff) +
             " (bound 0.05); slab mass " + fmt(slab_weight, 3));
}

struct Error3Scores {
  std::vector<std::vector<EffectScore>> ladblss, ladbl, blss;
  std::vector<GroundTruth> truth;
};

Error3Scores g_error3;

void criterion3() {
  const auto t0 = Clock::now();
  struct Plan {
    int error;
    std::vector<MethodId> methods;
  };
  const std::vector<Plan> plans = {{1, {MethodId::LADBLSS}},
                                   {3, {MethodId::LADBLSS, MethodId::BLSS, MethodId::LADBL}},
                                   {5, {MethodId::LADBLSS, MethodId::BL}}};
  std::map<std::pair<int, MethodId>, std::vector<double>> auc;
  for (const auto& plan : plans) {
    for (std::size_t rep = 0; rep < kReplicates; ++rep) {
      const auto data = desk_dataset(GenotypeSetting::Expression, plan.error, rep);
      for (auto method : plan.methods) {
        const auto scores = desk_scan(data, method, rep);
        auc[{plan.error, method}].push_back(roc_auc(scores, *data.truth));
        if (plan.error == 3) {
          auto& slot = method == MethodId::LADBLSS ? g_error3.ladblss
                       : method == MethodId::BLSS  ? g_error3.blss
                                                   : g_error3.ladbl;
          slot.push_back(scores);
          if (method == MethodId::LADBLSS) g_error3.truth.push_back(*data.truth);
        }
      }
      progress("criterion 3: error " + std::to_string(plan.error) + " replicate " + std::to_string(rep + 1) +
               " done, " + fmt(seconds_since(t0), 0) + " s");
    }
  }
  auto m = [&](int e, MethodId id) { return mean_of(auc[{e, id}]); };
  auto sd = [&](int e, MethodId id) { return summarize_replicates(auc[{e, id}]).sd; };
  const double a1 = m(1, MethodId::LADBLSS);
  report("3a", a1 >= 0.95,
         "Error 1, LADBLSS pooled AUC " + fmt(a1) + " (sd " + fmt(sd(1, MethodId::LADBLSS), 3) +
             ", 10 replicates), bound >= 0.95");
  const double l3 = m(3, MethodId::LADBLSS), b3 = m(3, MethodId::BLSS), lb3 = m(3, MethodId::LADBL);
  report("3b", l3 - b3 >= 0.25 && l3 > lb3,
         "Error 3, AUC LADBLSS " + fmt(l3) + ", BLSS " + fmt(b3) + ", LADBL " + fmt(lb3) +
             "; need LADBLSS - BLSS >= 0.25 (got " + fmt(l3 - b3) + ") and LADBLSS > LADBL");
  const double l5 = m(5, MethodId::LADBLSS), bl5 = m(5, MethodId::BL);
  report("3c", l5 >= bl5 + 0.15,
         "Error 5, AUC LADBLSS " + fmt(l5) + ", BL " + fmt(bl5) + "; need difference >= 0.15 (got " +
             fmt(l5 - bl5) + "); " + fmt(seconds_since(t0) / 60.0, 1) + " min for criterion 3");
}

void criterion4() {
  if (g_error3.truth.size() != kReplicates) {
    report("4", false, "needs the Error 3 scans of criterion 3 (run criteria 3 and 4 together)");
    return;
  }
  const std::size_t k = 20;
  std::size_t main_ok = 0, int_ok = 0, both = 0;
  double lm = 0, lbm = 0, li = 0, bi = 0;
  for (std::size_t rep = 0; rep < kReplicates; ++rep) {
    const auto& t = g_error3.truth[rep];
    const auto a = top_k(g_error3.ladblss[rep], t, k);
    const auto b = top_k(g_error3.ladbl[rep], t, k);
    const auto c = top_k(g_error3.blss[rep], t, k);
    const bool mo = a.mains >= b.mains, io = a.interactions >= c.interactions;
    main_ok += mo;
    int_ok += io;
    both += mo && io;
    lm += a.mains / 10.0;
    lbm += b.mains / 10.0;
    li += a.interactions / 10.0;
    bi += c.interactions / 10.0;
  }
  report("4", both >= 8,
         "Error 3, top-20: both orderings hold in " + std::to_string(both) + "/10 replicates (mains " +
             std::to_string(main_ok) + "/10, interactions " + std::to_string(int_ok) +
             "/10); mean true mains LADBLSS " + fmt(lm, 2) + " vs LADBL " + fmt(lbm, 2) +
             ", true interactions LADBLSS " + fmt(li, 2) + " vs BLSS " + fmt(bi, 2));
}

void criterion5() {
  const auto t0 = Clock::now();
  std::vector<double> s2, s3;
  for (std::size_t rep = 0; rep < kReplicates; ++rep) {
    for (auto setting : {GenotypeSetting::SNPQuartile, GenotypeSetting::SNPLD}) {
      const auto data = desk_dataset(setting, 1, rep);
      const double a = roc_auc(desk_scan(data, MethodId::LADBLSS, rep), *data.truth);
      (setting == GenotypeSetting::SNPQuartile ? s2 : s3).push_back(a);
    }
    progress("criterion 5: replicate " + std::to_string(rep + 1) + " done, " + fmt(seconds_since(t0), 0) + " s");
  }
  const double m2 = mean_of(s2), m3 = mean_of(s3);
  report("5", m2 >= 0.93 && m3 >= 0.93,
         "Error 1, LADBLSS pooled AUC: quartile SNPs " + fmt(m2) + ", LD SNPs " + fmt(m3) + "; bound >= 0.93 each");
}

void criterion6() {
  const auto data = desk_dataset(GenotypeSetting::Expression, 1, 0);
  const auto work = standardize(data, ResponseCentre::Median);
  const std::size_t gene = data.truth->main_idx.front();
  auto cfg = standard_config();
  cfg.n_chains = 4;
  RngStream rng(kSeed, {0, gene, 0});
  const auto s = run_chain(build_marginal_design(work, gene), MethodId::LADBLSS, Hyperparameters{}, cfg, rng);
  double worst = 0.0;
  std::string worst_name;
  std::size_t defined = 0, constant = 0;
  bool ok = true;
  for (const auto& e : s.effects) {
    const std::string name = to_string(e.kind) + std::to_string(e.index + 1);
    if (std::isnan(e.psrf)) {
      // Every retained draw of every chain identical (all in the spike): the chains agree.
      ++constant;
      continue;
    }
    ++defined;
    if (e.psrf > worst) {
      worst = e.psrf;
      worst_name = name;
    }
    ok = ok && e.psrf <= kPsrfThreshold;
  }
  report("6", ok,
         "LADBLSS, 4 overdispersed chains, gene " + std::to_string(gene + 1) + ": max PSRF " + fmt(worst) + " (" +
             worst_name + ") over " + std::to_string(defined) + " coefficients, " + std::to_string(constant) +
             " constant across chains; bound 1.1");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion7() {
  const fs::path root = fs::temp_directory_path() / ("robgxe_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  auto pipeline = [&](const std::string& tag, const std::string& threads) {
    const fs::path dir = root / tag;
    std::ostringstream out, err;
    int rc = run_cli({"simulate", "--setting", "1", "--error", "2", "--n", "200", "--p", "40", "--seed", "17", "--out",
                      (dir / "sim").string()},
                     out, err);
    rc |= run_cli({"scan", "--method", "ladblss", "--data", (dir / "sim/data.csv").string(), "--iters", "2000",
                   "--burnin", "1000", "--seed", "17", "--threads", threads, "--quiet", "--out",
                   (dir / "scan").string()},
                  out, err);
    rc |= run_cli({"evaluate", "--scores", (dir / "scan/results.csv").string(), "--truth",
                   (dir / "sim/truth.csv").string(), "--topk", "20", "--out", (dir / "eval").string()},
                  out, err);
    return rc;
  };
  const int rc = pipeline("a", "1") | pipeline("b", "1") | pipeline("c", "4");
  const std::vector<std::string> files = {"sim/data.csv", "sim/truth.csv", "scan/results.csv", "eval/metrics.csv",
                                          "eval/roc.csv"};
  std::size_t identical = 0;
  for (const auto& f : files) {
    const auto a = slurp(root / "a" / f);
    identical += (!a.empty() && a == slurp(root / "b" / f) && a == slurp(root / "c" / f)) ? 1 : 0;
  }
  fs::remove_all(root);
  report("7", rc == 0 && identical == files.size(),
         "simulate -> scan -> evaluate run 3 times (1, 1 and 4 threads): " + std::to_string(identical) + "/" +
             std::to_string(files.size()) + " output CSVs byte-identical, exit codes " + (rc == 0 ? "0" : "non-zero"));
}

void criterion8() {
  SimConfig cfg;
  cfg.n = 200;
  cfg.p = 500;
  cfg.seed = kSeed;
  auto srng = simulation_stream(kSeed, 0);
  const auto data = simulate_dataset(cfg, srng);
  const auto work = standardize(data, ResponseCentre::Median);

  const auto design = build_marginal_design(work, 0);
  RngStream rng(kSeed, {0, 0, 0});
  auto t0 = Clock::now();
  run_chain(design, MethodId::LADBLSS, Hyperparameters{}, standard_config(), rng);
  const double one = seconds_since(t0);

  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  ScanOptions opts;
  opts.threads = 0;
  t0 = Clock::now();
  const auto r = marginal_scan(data, MethodId::LADBLSS, Hyperparameters{}, standard_config(), kSeed, opts);
  const double full = seconds_since(t0);
  // The bound is stated for 8 cores; on fewer cores the measured time is an upper bound.
  const double eight_core = cores >= 8 ? full : full * static_cast<double>(cores) / 8.0;
  report("8", one <= 1.0 && full <= 120.0 && !r.failed,
         "one LADBLSS gene (n=200, q=4, m=3, 10000 iterations) " + fmt(one, 3) + " s (bound 1 s); p=500 scan " +
             fmt(full, 1) + " s on " + std::to_string(cores) + " core(s) (bound 120 s on 8 cores; ideal 8-core " +
             "scaling gives " + fmt(eight_core, 1) + " s)");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> wanted(argv + 1, argv + argc);
  auto run = [&](const std::string& id, void (*fn)()) {
    if (!wanted.empty() && !wanted.count(id)) return;
    progress("criterion " + id + " ...");
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  };
  run("1", criterion1);
  run("2", criterion2);
  run("3", criterion3);
  run("4", criterion4);
  run("5", criterion5);
  run("6", criterion6);
  run("7", criterion7);
  run("8", criterion8);

  std::size_t passed = 0;
  for (const auto& o : g_outcomes) passed += o.pass ? 1 : 0;
  std::printf("acceptance: %zu/%zu passed\n", passed, g_outcomes.size());
  return passed == g_outcomes.size() ? 0 : 1;
}
