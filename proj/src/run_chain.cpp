#include "robgxe/errors.hpp"
#include "robgxe/samplers.hpp"

namespace robgxe {

namespace {

template <class Sampler>
ChainTrace run_sampler(Sampler& sampler, const GibbsConfig& cfg, RngStream& rng, std::size_t q, std::size_t m) {
  const std::size_t d = 2 * q + m + 1;
  const std::size_t keep = cfg.retained();
  ChainTrace tr;
  tr.q = q;
  tr.m = m;
  tr.draws.resize(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(d));
  tr.active.assign(keep * d, 1);
  std::size_t row = 0;
  for (std::size_t it = 0; it < cfg.n_iter && row < keep; ++it) {
    try {
      sampler.sweep(rng, cfg.frozen);
    } catch (const GuardError& e) {
      throw GuardError("iteration " + std::to_string(it) + ": " + e.what());
    }
    if (it < cfg.burn_in || (it - cfg.burn_in + 1) % cfg.thin != 0) continue;
    const ChainState& st = sampler.state();
    const auto r = static_cast<Eigen::Index>(row);
    Eigen::Index c = 0;
    for (Eigen::Index k = 0; k < st.alpha.size(); ++k) tr.draws(r, c++) = st.alpha[k];
    for (Eigen::Index t = 0; t < st.gamma.size(); ++t) tr.draws(r, c++) = st.gamma[t];
    tr.active[static_cast<std::size_t>(c) * keep + row] = st.beta_active ? 1 : 0;
    tr.draws(r, c++) = st.beta;
    for (Eigen::Index k = 0; k < st.eta.size(); ++k) {
      tr.active[static_cast<std::size_t>(c) * keep + row] = st.eta_active[static_cast<std::size_t>(k)];
      tr.draws(r, c++) = st.eta[k];
    }
    ++row;
  }
  return tr;
}

}  // namespace

ChainTrace run_single_chain(const MarginalDesign& design, MethodId method, const Hyperparameters& hp,
                            const GibbsConfig& cfg, RngStream& rng, InitMode init) {
  cfg.validate();
  hp.validate();
  ChainState st = init_chain(design, hp, rng, init);
  if (is_robust(method)) {
    LadGibbs sampler(design, hp, has_spike(method), std::move(st));
    return run_sampler(sampler, cfg, rng, design.q(), design.m());
  }
  GaussGibbs sampler(design, hp, has_spike(method), std::move(st));
  return run_sampler(sampler, cfg, rng, design.q(), design.m());
}

std::vector<ChainTrace> run_chains(const MarginalDesign& design, MethodId method, const Hyperparameters& hp,
                                   const GibbsConfig& cfg, RngStream& rng) {
  cfg.validate();
  const InitMode init = (cfg.n_chains > 1 || cfg.overdispersed) ? InitMode::Overdispersed : InitMode::Neutral;
  std::vector<ChainTrace> traces;
  traces.reserve(cfg.n_chains);
  traces.push_back(run_single_chain(design, method, hp, cfg, rng, init));
  for (std::size_t c = 1; c < cfg.n_chains; ++c) {
    StreamId id = rng.id();
    id.chain += c;
    RngStream other(rng.seed(), id);
    traces.push_back(run_single_chain(design, method, hp, cfg, other, init));
  }
  return traces;
}

PosteriorSummary run_chain(const MarginalDesign& design, MethodId method, const Hyperparameters& hp,
                           const GibbsConfig& cfg, RngStream& rng) {
  const auto traces = run_chains(design, method, hp, cfg, rng);
  return summarize(traces, method, design.gene, cfg);
}

}  // namespace robgxe
