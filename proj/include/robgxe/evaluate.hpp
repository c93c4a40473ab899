#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robgxe/model.hpp"
#include "robgxe/summary.hpp"

namespace robgxe {

/// Fraction of draws whose slab indicator is set. Throws ConfigError when empty.
double inclusion_probability(std::span<const char> indicators);

/// True iff the equal-tailed `level` credible interval of the draws excludes 0.
bool credible_indicator(std::span<const double> draws, double level);

/// Average of credible_indicator over a grid of levels.
double credible_score(std::span<const double> draws, std::span<const double> levels);

/// A gene-linked effect with its identification score in [0, 1].
struct EffectScore {
  std::size_t gene = 0;
  EffectKind kind = EffectKind::Main;   ///< Main or Interaction
  std::size_t env = 0;                  ///< env index for interactions
  double score = 0.0;
};

enum class EffectCategory { Main, Interaction, Pooled };

/// Main and interaction scores of every gene in a scan (failed genes score 0).
std::vector<EffectScore> effect_scores(std::span<const PosteriorSummary> scan);

struct RocPoint {
  double cutoff = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

/// TPR/FPR of the rule "score >= cutoff" at every distinct score, plus a
/// cutoff above the maximum; sorted by increasing cutoff.
std::vector<RocPoint> roc_curve(std::span<const EffectScore> scores, const GroundTruth& truth,
                                EffectCategory category = EffectCategory::Pooled);

/// Area under the ROC curve, i.e. the Mann-Whitney statistic with ties
/// counted one half. Throws DegenerateError if the category has no true or
/// no null effect.
double roc_auc(std::span<const EffectScore> scores, const GroundTruth& truth,
               EffectCategory category = EffectCategory::Pooled);

struct TopKCounts {
  std::size_t mains = 0;
  std::size_t interactions = 0;
  std::size_t total() const { return mains + interactions; }
};

/// The k highest-scoring mains and the k highest-scoring interactions are
/// selected separately (ties broken by gene then env index, ascending) and
/// the true signals among them counted.
TopKCounts top_k(std::span<const EffectScore> scores, const GroundTruth& truth, std::size_t k);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

/// Sample mean and standard deviation (n - 1 denominator); needs >= 2 values.
MeanSd summarize_replicates(std::span<const double> values);

}  // namespace robgxe
