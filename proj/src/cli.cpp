#include "robgxe/cli.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "robgxe/diagnostics.hpp"
#include "robgxe/errors.hpp"
#include "robgxe/evaluate.hpp"
#include "robgxe/format.hpp"
#include "robgxe/io.hpp"
#include "robgxe/samplers.hpp"
#include "robgxe/scan.hpp"
#include "robgxe/simulate.hpp"

namespace robgxe {

namespace {

struct Settings {
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  std::size_t threads = 1;
  std::string method = "ladblss";
  GibbsConfig gibbs;
  SimConfig sim;
  int setting = 1;
  int error = 1;
  Hyperparameters hp;
  bool standardize = true;
};

// One configurable value: its config key, a parser and a printer.
struct Field {
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

template <class T>
Field field(std::string key, T& target) {
  auto set = [&target, key](const std::string& text) {
    if constexpr (std::is_same_v<T, std::string>) {
      target = text;
    } else if constexpr (std::is_same_v<T, double>) {
      if (!parse_double(text, target)) throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1") target = true;
      else if (text == "false" || text == "0") target = false;
      else throw ConfigError("config key '" + key + "': expected true or false, got '" + text + "'");
    } else {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), target);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("config key '" + key + "': not an integer: '" + text + "'");
      }
    }
  };
  auto get = [&target]() -> std::string {
    if constexpr (std::is_same_v<T, std::string>) return target;
    else if constexpr (std::is_same_v<T, double>) return format_double(target);
    else if constexpr (std::is_same_v<T, bool>) return target ? "true" : "false";
    else return std::to_string(target);
  };
  return {std::move(key), set, get};
}

Field single_entry(std::string key, std::vector<double>& target) {
  auto set = [&target, key](const std::string& text) {
    double v;
    if (!parse_double(text, v)) throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
    target.assign(1, v);
  };
  auto get = [&target]() {
    std::string s;
    for (std::size_t i = 0; i < target.size(); ++i) s += (i ? " " : "") + format_double(target[i]);
    return s;
  };
  return {std::move(key), set, get};
}

std::vector<Field> fields(Settings& s) {
  auto& g = s.gibbs;
  auto& h = s.hp;
  auto& gh = s.hp.gauss;
  return {
      field("seed", s.seed),
      field("replicate", s.replicate),
      field("threads", s.threads),
      field("method", s.method),
      field("standardize", s.standardize),
      field("gibbs.iters", g.n_iter),
      field("gibbs.burnin", g.burn_in),
      field("gibbs.thin", g.thin),
      field("gibbs.chains", g.n_chains),
      field("sim.setting", s.setting),
      field("sim.error", s.error),
      field("sim.n", s.sim.n),
      field("sim.p", s.sim.p),
      field("sim.q", s.sim.q),
      field("sim.m", s.sim.m),
      field("sim.rho", s.sim.rho),
      field("sim.maf", s.sim.maf),
      field("sim.ld_r", s.sim.ld_r),
      field("sim.n_true_main", s.sim.n_true_main),
      field("sim.n_true_int", s.sim.n_true_int),
      field("hyper.a", h.a),
      field("hyper.b", h.b),
      field("hyper.c1", h.c1),
      field("hyper.d1", h.d1),
      field("hyper.c2", h.c2),
      field("hyper.d2", h.d2),
      field("hyper.r1", h.r1),
      field("hyper.u1", h.u1),
      field("hyper.r2", h.r2),
      field("hyper.u2", h.u2),
      field("hyper.alpha0", h.alpha0),
      field("hyper.gamma0", h.gamma0),
      field("hyper.r_c", gh.r_c),
      field("hyper.u_c", gh.u_c),
      field("hyper.r_e", gh.r_e),
      field("hyper.u_e", gh.u_e),
      field("hyper.a_c", gh.a_c),
      field("hyper.b_c", gh.b_c),
      field("hyper.a_e", gh.a_e),
      field("hyper.b_e", gh.b_e),
      field("hyper.s", gh.s),
      field("hyper.h", gh.h),
      single_entry("hyper.sigma_alpha0", gh.sigma_alpha0),
      single_entry("hyper.sigma_gamma0", gh.sigma_gamma0),
  };
}

void apply_config(Settings& s, const ConfigMap& cfg) {
  auto fs = fields(s);
  for (const auto& [key, value] : cfg) {
    auto it = std::find_if(fs.begin(), fs.end(), [&](const Field& f) { return f.key == key; });
    if (it == fs.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(value);
  }
}

std::vector<std::pair<std::string, std::string>> manifest(Settings& s, const std::string& command,
                                                          const std::vector<std::string>& args,
                                                          std::vector<std::pair<std::string, std::string>> extra) {
  std::string line = "robgxe";
  for (const auto& a : args) line += " " + a;
  std::vector<std::pair<std::string, std::string>> out{
      {"tool", "robgxe"},
      {"version", kVersion},
      {"command", command},
      {"argv", line},
      {"compiler", __VERSION__},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
  };
  for (auto& e : extra) out.push_back(std::move(e));
  for (const auto& f : fields(s)) out.emplace_back(f.key, f.get());
  return out;
}

void add_gibbs_options(CLI::App* sub, Settings& s) {
  sub->add_option("--method", s.method, "ladblss, ladbl, blss or bl");
  sub->add_option("--iters", s.gibbs.n_iter, "Gibbs iterations per chain");
  sub->add_option("--burnin", s.gibbs.burn_in, "Discarded initial iterations");
  sub->add_option("--thin", s.gibbs.thin, "Keep every k-th draw after burn-in");
  sub->add_option("--chains", s.gibbs.n_chains, "Chains per gene (several chains start overdispersed)");
  sub->add_option("--seed", s.seed, "Master seed");
  sub->add_option("--replicate", s.replicate, "Replicate index entering every stream id");
}

int do_simulate(Settings& s, const fs::path& out_dir, const std::vector<std::string>& args, std::ostream& err) {
  s.sim.setting = setting_from_index(s.setting);
  s.sim.error = ErrorLaw::from_index(s.error);
  s.sim.seed = s.seed;
  s.sim.validate();
  ensure_directory(out_dir);
  auto rng = simulation_stream(s.seed, s.replicate);
  const auto data = simulate_dataset(s.sim, rng);
  write_dataset(data, out_dir / "data.csv");
  write_truth(*data.truth, out_dir / "truth.csv");
  write_manifest(out_dir / "manifest.txt", manifest(s, "simulate", args, {}));
  err << "simulate: wrote " << (out_dir / "data.csv").string() << " and truth.csv (n = " << data.n()
      << ", p = " << data.p() << ")\n";
  return kExitOk;
}

int do_scan(Settings& s, const fs::path& data_path, bool genotype, bool quiet, const fs::path& out_dir,
            const std::vector<std::string>& args, std::ostream& err) {
  const MethodId method = parse_method(s.method);
  s.gibbs.validate();
  s.hp.validate();
  const auto data = load_dataset(data_path, genotype);
  ensure_directory(out_dir);
  ScanOptions opts;
  opts.replicate = s.replicate;
  opts.threads = s.threads;
  opts.standardize = s.standardize;
  if (!quiet) {
    opts.progress = [&err, step = std::max<std::size_t>(1, data.p() / 10)](std::size_t done, std::size_t total) {
      if (done % step == 0 || done == total) err << "scan: " << done << "/" << total << " genes\n";
    };
  }
  const auto result = marginal_scan(data, method, s.hp, s.gibbs, s.seed, opts);
  write_results(result.genes, out_dir / "results.csv");
  write_manifest(out_dir / "manifest.txt",
                 manifest(s, "scan", args, {{"data", data_path.string()}, {"genotype", genotype ? "true" : "false"}}));
  if (result.failures > 0) err << "scan: " << result.failures << " gene(s) failed\n" << result.error_summary;
  return result.failed ? kExitRuntime : kExitOk;
}

int do_fit(Settings& s, const fs::path& data_path, bool genotype, std::size_t gene, const fs::path& out_dir,
           const std::vector<std::string>& args, std::ostream& err) {
  const MethodId method = parse_method(s.method);
  s.gibbs.validate();
  s.hp.validate();
  auto data = load_dataset(data_path, genotype);
  if (gene == 0 || gene > data.p()) {
    throw ConfigError("--gene must lie in 1.." + std::to_string(data.p()));
  }
  if (s.standardize) data = standardize(data, is_robust(method) ? ResponseCentre::Median : ResponseCentre::Mean);
  ensure_directory(out_dir);
  const auto design = build_marginal_design(data, gene - 1);
  RngStream rng(s.seed, {s.replicate, gene - 1, 0});
  const auto traces = run_chains(design, method, s.hp, s.gibbs, rng);
  for (std::size_t c = 0; c < traces.size(); ++c) {
    write_draws(traces[c], out_dir / ("draws_chain" + std::to_string(c + 1) + ".csv"));
  }
  write_fit_summary(summarize(traces, method, gene - 1, s.gibbs), out_dir / "summary.csv");
  write_manifest(out_dir / "manifest.txt", manifest(s, "fit", args,
                                                    {{"data", data_path.string()},
                                                     {"gene", std::to_string(gene)},
                                                     {"genotype", genotype ? "true" : "false"}}));
  err << "fit: gene " << gene << ", " << traces.size() << " chain(s) of " << s.gibbs.retained() << " draws\n";
  return kExitOk;
}

int do_evaluate(Settings& s, const fs::path& scores_path, const fs::path& truth_path, std::size_t k,
                const fs::path& out_dir, const std::vector<std::string>& args, std::ostream& err) {
  const auto scores = load_scores(scores_path);
  const auto truth = load_truth(truth_path);
  ensure_directory(out_dir);
  std::vector<std::pair<std::string, double>> metrics;
  std::ostringstream roc;
  roc << "category,cutoff,tpr,fpr\n";
  const std::pair<const char*, EffectCategory> cats[] = {
      {"pooled", EffectCategory::Pooled}, {"main", EffectCategory::Main}, {"interaction", EffectCategory::Interaction}};
  for (const auto& [name, cat] : cats) {
    double auc = std::numeric_limits<double>::quiet_NaN();
    try {
      auc = roc_auc(scores, truth, cat);
      for (const auto& pt : roc_curve(scores, truth, cat)) {
        roc << name << ',' << format_double(pt.cutoff) << ',' << format_double(pt.tpr) << ',' << format_double(pt.fpr)
            << '\n';
      }
    } catch (const DegenerateError& e) {
      err << "evaluate: " << name << " AUC undefined: " << e.what() << "\n";
    }
    metrics.emplace_back(std::string("auc_") + name, auc);
  }
  const auto top = top_k(scores, truth, k);
  metrics.emplace_back("topk_k", static_cast<double>(k));
  metrics.emplace_back("topk_main", static_cast<double>(top.mains));
  metrics.emplace_back("topk_interaction", static_cast<double>(top.interactions));
  metrics.emplace_back("topk_total", static_cast<double>(top.total()));

  std::ofstream m(out_dir / "metrics.csv", std::ios::binary);
  m << "metric,value\n";
  for (const auto& [name, v] : metrics) m << name << ',' << format_double(v) << '\n';
  std::ofstream r(out_dir / "roc.csv", std::ios::binary);
  r << roc.str();
  if (!m || !r) throw Error("write failed in " + out_dir.string());
  write_manifest(out_dir / "manifest.txt",
                 manifest(s, "evaluate", args,
                          {{"scores", scores_path.string()}, {"truth", truth_path.string()}, {"topk", std::to_string(k)}}));
  return kExitOk;
}

int do_diagnose(Settings& s, const fs::path& draws_dir, std::size_t stride, const fs::path& out_dir,
                const std::vector<std::string>& args, std::ostream& err) {
  if (stride == 0) throw ConfigError("--stride must be >= 1");
  const auto set = load_draws(draws_dir);
  if (set.chains.size() < 2) throw ConfigError("diagnose needs at least 2 chains");
  ensure_directory(out_dir);
  std::ofstream summary(out_dir / "psrf.csv", std::ios::binary);
  std::ofstream trace(out_dir / "psrf_trace.csv", std::ios::binary);
  summary << "parameter,psrf,upper,slab_psrf,slab_upper,indicator_psrf,indicator_upper,converged\n";
  trace << "parameter,iteration,psrf,upper\n";
  constexpr double na = std::numeric_limits<double>::quiet_NaN();
  std::size_t unconverged = 0;
  for (std::size_t c = 0; c < set.names.size(); ++c) {
    std::vector<std::vector<double>> per_chain;
    std::vector<std::vector<char>> active;
    bool has_zero = false;
    for (const auto& M : set.chains) {
      auto col = M.col(static_cast<Eigen::Index>(c));
      per_chain.emplace_back(col.data(), col.data() + col.size());
      std::vector<char> a;
      for (double x : per_chain.back()) {
        a.push_back(x != 0.0 ? 1 : 0);
        has_zero |= x == 0.0;
      }
      active.push_back(std::move(a));
    }
    const std::string& name = set.names[c];
    const ChainMatrix chains(per_chain);
    PsrfResult full{na, na};
    try {
      full = psrf(chains);
    } catch (const DegenerateError&) {
    }
    SpikeDiagnostic spike;
    if (has_zero) spike = psrf_spike(per_chain, active);
    const bool converged = std::isnan(full.psrf) || full.psrf <= kPsrfThreshold;
    unconverged += converged ? 0 : 1;
    summary << name << ',' << format_double(full.psrf) << ',' << format_double(full.upper) << ','
            << format_double(spike.slab_defined ? spike.slab.psrf : na) << ','
            << format_double(spike.slab_defined ? spike.slab.upper : na) << ','
            << format_double(spike.indicator_defined ? spike.indicator.psrf : na) << ','
            << format_double(spike.indicator_defined ? spike.indicator.upper : na) << ','
            << (converged ? "true" : "false") << '\n';
    if (chains.length() >= stride) {
      std::vector<PsrfTracePoint> pts;
      try {
        pts = psrf_trace(chains, stride);
      } catch (const DegenerateError&) {
        pts = {};
      }
      for (const auto& pt : pts) {
        trace << name << ',' << pt.iteration << ',' << format_double(pt.psrf) << ',' << format_double(pt.upper) << '\n';
      }
    }
  }
  if (!summary || !trace) throw Error("write failed in " + out_dir.string());
  write_manifest(out_dir / "manifest.txt", manifest(s, "diagnose", args,
                                                    {{"draws", draws_dir.string()}, {"stride", std::to_string(stride)}}));
  err << "diagnose: " << set.names.size() - unconverged << "/" << set.names.size() << " parameters with PSRF <= "
      << kPsrfThreshold << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  try {
    // The config file supplies defaults; explicit flags parsed below override it.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") apply_config(s, load_config(args[i + 1]));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  CLI::App app{"Robust Bayesian marginal gene-environment interaction scans", "robgxe"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key = value file with [section] headers")->check(CLI::ExistingFile);

  fs::path out_dir, data_path, scores_path, truth_path, draws_dir;
  bool genotype = false, quiet = false, no_standardize = false;
  std::size_t gene = 0, topk = 100, stride = 100;

  auto* sim = app.add_subcommand("simulate", "Simulate a data set and its ground truth");
  sim->add_option("--setting", s.setting, "1 expression, 2 quartile SNPs, 3 LD SNPs");
  sim->add_option("--error", s.error, "1 N(0,1), 2 t(2), 3 LogNormal(0,2), 4 and 5 normal/Cauchy mixtures");
  sim->add_option("--n", s.sim.n, "Sample size");
  sim->add_option("--p", s.sim.p, "Number of genetic factors");
  sim->add_option("--q", s.sim.q, "Number of environment factors");
  sim->add_option("--m", s.sim.m, "Number of clinical factors");
  sim->add_option("--rho", s.sim.rho, "AR1 correlation of the genetic factors");
  sim->add_option("--seed", s.seed, "Master seed");
  sim->add_option("--replicate", s.replicate, "Replicate index");
  sim->add_option("--out", out_dir, "Output directory")->required();

  auto* scan = app.add_subcommand("scan", "Fit the marginal model of every gene");
  add_gibbs_options(scan, s);
  scan->add_option("--data", data_path, "Dataset CSV")->required()->check(CLI::ExistingFile);
  scan->add_flag("--genotype", genotype, "Require X cells in {0, 1, 2}");
  scan->add_option("--threads", s.threads, "Worker threads (0 = all cores)");
  scan->add_flag("--no-standardize", no_standardize, "Use the data as given");
  scan->add_flag("--quiet", quiet, "No progress output");
  scan->add_option("--out", out_dir, "Output directory")->required();

  auto* fit = app.add_subcommand("fit", "Fit one gene and keep its draws");
  add_gibbs_options(fit, s);
  fit->add_option("--data", data_path, "Dataset CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--gene", gene, "1-based gene index")->required();
  fit->add_flag("--genotype", genotype, "Require X cells in {0, 1, 2}");
  fit->add_flag("--no-standardize", no_standardize, "Use the data as given");
  fit->add_option("--out", out_dir, "Output directory")->required();

  auto* eval = app.add_subcommand("evaluate", "AUC, ROC and top-k against a ground truth");
  eval->add_option("--scores", scores_path, "results.csv from scan")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", truth_path, "truth.csv")->required()->check(CLI::ExistingFile);
  eval->add_option("--topk", topk, "Effects selected per category");
  eval->add_option("--out", out_dir, "Output directory")->required();

  auto* diag = app.add_subcommand("diagnose", "PSRF summary and traces from draws_chain*.csv");
  diag->add_option("--draws", draws_dir, "Directory written by fit")->required()->check(CLI::ExistingDirectory);
  diag->add_option("--stride", stride, "Iterations between trace points");
  diag->add_option("--out", out_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (no_standardize) s.standardize = false;

  try {
    if (sim->parsed()) return do_simulate(s, out_dir, args, err);
    if (scan->parsed()) return do_scan(s, data_path, genotype, quiet, out_dir, args, err);
    if (fit->parsed()) return do_fit(s, data_path, genotype, gene, out_dir, args, err);
    if (eval->parsed()) return do_evaluate(s, scores_path, truth_path, topk, out_dir, args, err);
    if (diag->parsed()) return do_diagnose(s, draws_dir, stride, out_dir, args, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace robgxe
