#include "robgxe/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robgxe/errors.hpp"

namespace robgxe {

double inclusion_probability(std::span<const char> indicators) {
  if (indicators.empty()) throw ConfigError("inclusion probability of an empty draw set");
  std::size_t hits = 0;
  for (char c : indicators) hits += c ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(indicators.size());
}

bool credible_indicator(std::span<const double> draws, double level) {
  if (draws.empty()) throw ConfigError("credible interval of an empty draw set");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("credible level must lie in (0, 1)");
  const auto [lo, hi] = credible_interval(draws, level);
  return lo > 0.0 || hi < 0.0;
}

double credible_score(std::span<const double> draws, std::span<const double> levels) {
  if (levels.empty()) return 0.0;
  if (draws.empty()) throw ConfigError("credible score of an empty draw set");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  double hits = 0;
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("credible level must lie in (0, 1)");
    const double lo = quantile_sorted(sorted, 0.5 * (1.0 - level));
    const double hi = quantile_sorted(sorted, 0.5 * (1.0 + level));
    if (lo > 0.0 || hi < 0.0) hits += 1.0;
  }
  return hits / static_cast<double>(levels.size());
}

std::vector<EffectScore> effect_scores(std::span<const PosteriorSummary> scan) {
  std::vector<EffectScore> out;
  for (const auto& s : scan) {
    const std::size_t q = s.q;
    out.push_back({s.gene, EffectKind::Main, 0, s.ok ? s.main().score() : 0.0});
    for (std::size_t k = 0; k < q; ++k) {
      out.push_back({s.gene, EffectKind::Interaction, k, s.ok ? s.interaction(k).score() : 0.0});
    }
  }
  return out;
}

namespace {

bool in_category(const EffectScore& e, EffectCategory c) {
  switch (c) {
    case EffectCategory::Main: return e.kind == EffectKind::Main;
    case EffectCategory::Interaction: return e.kind == EffectKind::Interaction;
    case EffectCategory::Pooled: return e.kind == EffectKind::Main || e.kind == EffectKind::Interaction;
  }
  return false;
}

bool is_true(const EffectScore& e, const GroundTruth& truth) {
  return e.kind == EffectKind::Main ? truth.is_true_main(e.gene)
                                    : truth.is_true_interaction(e.gene, e.env);
}

struct Labeled {
  double score;
  bool positive;
};

std::vector<Labeled> labeled(std::span<const EffectScore> scores, const GroundTruth& truth,
                             EffectCategory category) {
  std::vector<Labeled> out;
  for (const auto& e : scores) {
    if (in_category(e, category)) out.push_back({e.score, is_true(e, truth)});
  }
  return out;
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const EffectScore> scores, const GroundTruth& truth,
                                EffectCategory category) {
  auto items = labeled(scores, truth, category);
  std::size_t pos = 0;
  for (const auto& it : items) pos += it.positive ? 1 : 0;
  const std::size_t neg = items.size() - pos;
  if (pos == 0 || neg == 0) throw DegenerateError("ROC undefined: need both true and null effects");
  std::sort(items.begin(), items.end(), [](const Labeled& a, const Labeled& b) { return a.score > b.score; });

  // Walk cutoffs from high to low; the rule is score >= cutoff.
  std::vector<RocPoint> out;
  const double top = items.front().score;
  out.push_back({std::nextafter(top, HUGE_VAL), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < items.size();) {
    const double cut = items[i].score;
    while (i < items.size() && items[i].score == cut) {
      (items[i].positive ? tp : fp) += 1;
      ++i;
    }
    out.push_back({cut, static_cast<double>(tp) / static_cast<double>(pos),
                   static_cast<double>(fp) / static_cast<double>(neg)});
  }
  std::reverse(out.begin(), out.end());
  if (out.front().cutoff > 0.0) out.insert(out.begin(), RocPoint{0.0, 1.0, 1.0});
  return out;
}

double roc_auc(std::span<const EffectScore> scores, const GroundTruth& truth, EffectCategory category) {
  auto items = labeled(scores, truth, category);
  std::size_t pos = 0;
  for (const auto& it : items) pos += it.positive ? 1 : 0;
  const std::size_t neg = items.size() - pos;
  if (pos == 0 || neg == 0) throw DegenerateError("AUC undefined: need both true and null effects");

  // Mann-Whitney via mid-ranks: AUC = (R_pos - pos (pos + 1) / 2) / (pos neg).
  std::sort(items.begin(), items.end(), [](const Labeled& a, const Labeled& b) { return a.score < b.score; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && items[j].score == items[i].score) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (items[t].positive) rank_sum += mid_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos), n = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

TopKCounts top_k(std::span<const EffectScore> scores, const GroundTruth& truth, std::size_t k) {
  auto count_top = [&](EffectKind kind) {
    std::vector<const EffectScore*> cat;
    for (const auto& e : scores) {
      if (e.kind == kind) cat.push_back(&e);
    }
    if (k > cat.size()) {
      throw ConfigError("top_k: k = " + std::to_string(k) + " exceeds " + std::to_string(cat.size()) +
                        " scored " + to_string(kind) + " effects");
    }
    std::stable_sort(cat.begin(), cat.end(), [](const EffectScore* a, const EffectScore* b) {
      if (a->score != b->score) return a->score > b->score;
      if (a->gene != b->gene) return a->gene < b->gene;
      return a->env < b->env;
    });
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) hits += is_true(*cat[i], truth) ? 1 : 0;
    return hits;
  };
  return {count_top(EffectKind::Main), count_top(EffectKind::Interaction)};
}

MeanSd summarize_replicates(std::span<const double> values) {
  if (values.size() < 2) throw DegenerateError("standard deviation needs at least 2 replicates");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace robgxe
