#include "robgxe/summary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "robgxe/diagnostics.hpp"
#include "robgxe/errors.hpp"
#include "robgxe/evaluate.hpp"

namespace robgxe {

std::string to_string(MethodId m) {
  switch (m) {
    case MethodId::LADBLSS: return "ladblss";
    case MethodId::LADBL: return "ladbl";
    case MethodId::BLSS: return "blss";
    case MethodId::BL: return "bl";
  }
  return "?";
}

MethodId parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto m : kAllMethods) {
    if (to_string(m) == lower) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "' (expected ladblss, ladbl, blss or bl)");
}

std::string to_string(EffectKind k) {
  switch (k) {
    case EffectKind::Environment: return "env";
    case EffectKind::Clinical: return "clinical";
    case EffectKind::Main: return "main";
    case EffectKind::Interaction: return "interaction";
  }
  return "?";
}

std::vector<double> default_credible_levels() {
  std::vector<double> levels;
  for (int i = 50; i <= 95; i += 5) levels.push_back(i / 100.0);
  levels.push_back(0.99);
  return levels;
}

void GibbsConfig::validate() const {
  if (n_iter == 0) throw ConfigError("n_iter must be >= 1");
  if (burn_in >= n_iter) throw ConfigError("burn_in must be < n_iter");
  if (thin == 0) throw ConfigError("thin must be >= 1");
  if (n_chains == 0) throw ConfigError("n_chains must be >= 1");
  if (retained() == 0) throw ConfigError("no draws retained after burn-in and thinning");
  for (double l : credible_levels) {
    if (!(l > 0.0 && l < 1.0)) throw ConfigError("credible levels must lie in (0, 1)");
  }
}

double EffectSummary::score() const { return std::isnan(inclusion) ? credible_score : inclusion; }

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw ConfigError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

std::pair<double, double> credible_interval(std::span<const double> values, double level) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return {quantile_sorted(v, 0.5 * (1.0 - level)), quantile_sorted(v, 0.5 * (1.0 + level))};
}

namespace {

EffectKind kind_of(std::size_t col, std::size_t q, std::size_t m, std::size_t& index) {
  if (col < q) {
    index = col;
    return EffectKind::Environment;
  }
  if (col < q + m) {
    index = col - q;
    return EffectKind::Clinical;
  }
  if (col == q + m) {
    index = 0;
    return EffectKind::Main;
  }
  index = col - q - m - 1;
  return EffectKind::Interaction;
}

}  // namespace

PosteriorSummary summarize(std::span<const ChainTrace> chains, MethodId method, std::size_t gene,
                           const GibbsConfig& cfg) {
  if (chains.empty()) throw ConfigError("summarize: no chains");
  const auto& first = chains.front();
  PosteriorSummary out;
  out.method = method;
  out.gene = gene;
  out.retained = first.rows();
  out.chains = chains.size();
  out.credible_levels = cfg.credible_levels;
  out.q = first.q;
  out.m = first.m;
  const std::size_t d = first.cols();
  const bool spike = has_spike(method);

  std::vector<double> pooled;
  std::vector<char> pooled_active;
  for (std::size_t col = 0; col < d; ++col) {
    EffectSummary e;
    e.kind = kind_of(col, out.q, out.m, e.index);
    pooled.clear();
    pooled_active.clear();
    std::vector<std::vector<double>> per_chain(chains.size());
    std::vector<std::vector<char>> per_chain_active(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const auto& tr = chains[c];
      auto colv = tr.draws.col(static_cast<Eigen::Index>(col));
      per_chain[c].assign(colv.data(), colv.data() + colv.size());
      per_chain_active[c].assign(tr.active.begin() + static_cast<std::ptrdiff_t>(col * tr.rows()),
                                 tr.active.begin() + static_cast<std::ptrdiff_t>((col + 1) * tr.rows()));
      pooled.insert(pooled.end(), per_chain[c].begin(), per_chain[c].end());
      pooled_active.insert(pooled_active.end(), per_chain_active[c].begin(), per_chain_active[c].end());
    }

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    e.median = quantile_sorted(sorted, 0.5);
    double sum = 0.0;
    for (double x : pooled) sum += x;
    e.mean = sum / static_cast<double>(pooled.size());
    e.lower95 = quantile_sorted(sorted, 0.025);
    e.upper95 = quantile_sorted(sorted, 0.975);
    double hits = 0.0;
    for (double level : cfg.credible_levels) {
      const double lo = quantile_sorted(sorted, 0.5 * (1.0 - level));
      const double hi = quantile_sorted(sorted, 0.5 * (1.0 + level));
      e.intervals.emplace_back(lo, hi);
      if (lo > 0.0 || hi < 0.0) hits += 1.0;
    }
    e.credible_score = cfg.credible_levels.empty() ? 0.0 : hits / static_cast<double>(cfg.credible_levels.size());
    const bool gene_linked = e.kind == EffectKind::Main || e.kind == EffectKind::Interaction;
    if (spike && gene_linked) e.inclusion = inclusion_probability(pooled_active);

    if (chains.size() >= 2 && out.retained >= 10) {
      try {
        const auto r = psrf(ChainMatrix(per_chain));
        e.psrf = r.psrf;
        e.psrf_upper = r.upper;
      } catch (const DegenerateError&) {
        // every draw identical (e.g. a coefficient stuck in the spike)
      }
    }
    if (cfg.keep_draws) {
      e.draws = std::move(pooled);
      e.active = std::move(pooled_active);
      pooled = {};
      pooled_active = {};
    }
    out.effects.push_back(std::move(e));
  }
  return out;
}

}  // namespace robgxe
