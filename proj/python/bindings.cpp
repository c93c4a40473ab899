#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "robgxe/cli.hpp"
#include "robgxe/diagnostics.hpp"
#include "robgxe/errors.hpp"
#include "robgxe/evaluate.hpp"
#include "robgxe/io.hpp"
#include "robgxe/samplers.hpp"
#include "robgxe/scan.hpp"
#include "robgxe/simulate.hpp"

namespace py = pybind11;
using namespace robgxe;

namespace {

GibbsConfig gibbs(std::size_t iters, std::size_t burnin, std::size_t thin, std::size_t chains, bool keep_draws) {
  GibbsConfig cfg;
  cfg.n_iter = iters;
  cfg.burn_in = burnin;
  cfg.thin = thin;
  cfg.n_chains = chains;
  cfg.keep_draws = keep_draws;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_robgxe, m) {
  m.doc() = "Robust Bayesian marginal gene-environment interaction scans";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<GuardError>(m, "GuardError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::enum_<MethodId>(m, "Method")
      .value("LADBLSS", MethodId::LADBLSS)
      .value("LADBL", MethodId::LADBL)
      .value("BLSS", MethodId::BLSS)
      .value("BL", MethodId::BL);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def(py::init<>())
      .def_readwrite("main_idx", &GroundTruth::main_idx)
      .def_readwrite("main_value", &GroundTruth::main_value)
      .def_property(
          "int_idx",
          [](const GroundTruth& t) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            for (const auto& p : t.int_idx) out.emplace_back(p.gene, p.env);
            return out;
          },
          [](GroundTruth& t, const std::vector<std::pair<std::size_t, std::size_t>>& v) {
            t.int_idx.clear();
            for (const auto& [g, e] : v) t.int_idx.push_back({g, e});
          })
      .def_readwrite("int_value", &GroundTruth::int_value)
      .def_readwrite("alpha", &GroundTruth::alpha)
      .def_readwrite("gamma", &GroundTruth::gamma)
      .def("is_true_main", &GroundTruth::is_true_main)
      .def("is_true_interaction", &GroundTruth::is_true_interaction);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("y", &Dataset::y)
      .def_readwrite("E", &Dataset::E)
      .def_readwrite("C", &Dataset::C)
      .def_readwrite("X", &Dataset::X)
      .def_readwrite("truth", &Dataset::truth)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p)
      .def_property_readonly("q", &Dataset::q)
      .def_property_readonly("m", &Dataset::m)
      .def("validate", &Dataset::validate);

  py::class_<EffectSummary>(m, "EffectSummary")
      .def_property_readonly("kind", [](const EffectSummary& e) { return to_string(e.kind); })
      .def_readonly("index", &EffectSummary::index)
      .def_readonly("draws", &EffectSummary::draws)
      .def_readonly("median", &EffectSummary::median)
      .def_readonly("mean", &EffectSummary::mean)
      .def_readonly("lower95", &EffectSummary::lower95)
      .def_readonly("upper95", &EffectSummary::upper95)
      .def_readonly("inclusion", &EffectSummary::inclusion)
      .def_readonly("credible_score", &EffectSummary::credible_score)
      .def_readonly("psrf", &EffectSummary::psrf)
      .def_property_readonly("score", &EffectSummary::score);

  py::class_<PosteriorSummary>(m, "PosteriorSummary")
      .def_readonly("gene", &PosteriorSummary::gene)
      .def_readonly("retained", &PosteriorSummary::retained)
      .def_readonly("chains", &PosteriorSummary::chains)
      .def_readonly("effects", &PosteriorSummary::effects)
      .def_readonly("ok", &PosteriorSummary::ok)
      .def_readonly("error", &PosteriorSummary::error)
      .def_property_readonly("main", &PosteriorSummary::main, py::return_value_policy::reference_internal)
      .def("interaction", &PosteriorSummary::interaction, py::return_value_policy::reference_internal);

  m.def(
      "simulate",
      [](std::size_t n, std::size_t p, std::size_t q, std::size_t mm, int setting, int error, std::uint64_t seed,
         std::uint64_t replicate, double rho) {
        SimConfig cfg;
        cfg.n = n;
        cfg.p = p;
        cfg.q = q;
        cfg.m = mm;
        cfg.setting = setting_from_index(setting);
        cfg.error = ErrorLaw::from_index(error);
        cfg.rho = rho;
        cfg.seed = seed;
        auto rng = simulation_stream(seed, replicate);
        return simulate_dataset(cfg, rng);
      },
      py::arg("n") = 200, py::arg("p") = 500, py::arg("q") = 4, py::arg("m") = 3, py::arg("setting") = 1,
      py::arg("error") = 1, py::arg("seed") = 1, py::arg("replicate") = 0, py::arg("rho") = 0.5);

  m.def(
      "fit",
      [](const Dataset& data, std::size_t gene, const std::string& method, std::size_t iters, std::size_t burnin,
         std::size_t thin, std::size_t chains, std::uint64_t seed, std::uint64_t replicate, bool standardize_data) {
        const MethodId id = parse_method(method);
        const auto cfg = gibbs(iters, burnin, thin, chains, true);
        const Dataset work =
            standardize_data ? standardize(data, is_robust(id) ? ResponseCentre::Median : ResponseCentre::Mean) : data;
        const auto design = build_marginal_design(work, gene);
        RngStream rng(seed, {replicate, gene, 0});
        py::gil_scoped_release release;
        return run_chain(design, id, Hyperparameters{}, cfg, rng);
      },
      py::arg("data"), py::arg("gene"), py::arg("method") = "ladblss", py::arg("iters") = 10000,
      py::arg("burnin") = 5000, py::arg("thin") = 1, py::arg("chains") = 1, py::arg("seed") = 1,
      py::arg("replicate") = 0, py::arg("standardize") = true);

  m.def(
      "scan",
      [](const Dataset& data, const std::string& method, std::size_t iters, std::size_t burnin, std::size_t thin,
         std::size_t chains, std::uint64_t seed, std::uint64_t replicate, std::size_t threads) {
        const auto cfg = gibbs(iters, burnin, thin, chains, false);
        ScanOptions opts;
        opts.replicate = replicate;
        opts.threads = threads;
        py::gil_scoped_release release;
        return marginal_scan(data, parse_method(method), Hyperparameters{}, cfg, seed, opts).genes;
      },
      py::arg("data"), py::arg("method") = "ladblss", py::arg("iters") = 10000, py::arg("burnin") = 5000,
      py::arg("thin") = 1, py::arg("chains") = 1, py::arg("seed") = 1, py::arg("replicate") = 0,
      py::arg("threads") = 1);

  m.def(
      "auc",
      [](const std::vector<PosteriorSummary>& scan, const GroundTruth& truth, const std::string& category) {
        const auto scores = effect_scores(scan);
        EffectCategory cat = EffectCategory::Pooled;
        if (category == "main") cat = EffectCategory::Main;
        else if (category == "interaction") cat = EffectCategory::Interaction;
        else if (category != "pooled") throw ConfigError("category must be pooled, main or interaction");
        return roc_auc(scores, truth, cat);
      },
      py::arg("scan"), py::arg("truth"), py::arg("category") = "pooled");

  m.def(
      "psrf",
      [](std::vector<std::vector<double>> chains) {
        const auto r = psrf(ChainMatrix(std::move(chains)));
        return std::make_pair(r.psrf, r.upper);
      },
      py::arg("chains"), "Gelman-Rubin PSRF and its upper 97.5% limit.");

  m.def(
      "sample_inverse_gaussian",
      [](double mu, double lambda, std::size_t size, std::uint64_t seed) {
        RngStream rng(seed);
        Vector out(static_cast<Eigen::Index>(size));
        for (auto& x : out) x = sample_inverse_gaussian(mu, lambda, rng);
        return out;
      },
      py::arg("mu"), py::arg("lam"), py::arg("size"), py::arg("seed") = 1);

  m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("genotype") = false);
  m.def("write_dataset", &write_dataset, py::arg("data"), py::arg("path"));
}
