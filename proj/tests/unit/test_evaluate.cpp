#include <doctest.h>

#include <algorithm>

#include "robgxe/errors.hpp"
#include "robgxe/evaluate.hpp"
#include "robgxe/rng.hpp"
#include "robgxe/distributions.hpp"

using namespace robgxe;

namespace {

// p genes, q = 2 environments; truth at the given positions.
GroundTruth make_truth(std::vector<std::size_t> mains, std::vector<GeneEnvPair> ints) {
  GroundTruth t;
  t.main_idx = std::move(mains);
  t.main_value.assign(t.main_idx.size(), 0.3);
  t.int_idx = std::move(ints);
  t.int_value.assign(t.int_idx.size(), 0.3);
  return t;
}

std::vector<EffectScore> random_scores(std::size_t p, std::size_t q, RngStream& rng, bool coarse) {
  std::vector<EffectScore> out;
  for (std::size_t j = 0; j < p; ++j) {
    auto draw = [&] { return coarse ? std::floor(rng.uniform() * 4.0) / 4.0 : rng.uniform(); };
    out.push_back({j, EffectKind::Main, 0, draw()});
    for (std::size_t k = 0; k < q; ++k) out.push_back({j, EffectKind::Interaction, k, draw()});
  }
  return out;
}

bool truth_of(const EffectScore& e, const GroundTruth& t) {
  return e.kind == EffectKind::Main ? t.is_true_main(e.gene) : t.is_true_interaction(e.gene, e.env);
}

double brute_force_auc(const std::vector<EffectScore>& s, const GroundTruth& t, EffectCategory c) {
  double wins = 0.0, pairs = 0.0;
  auto keep = [c](const EffectScore& e) {
    return c == EffectCategory::Pooled || (c == EffectCategory::Main) == (e.kind == EffectKind::Main);
  };
  for (const auto& a : s) {
    if (!keep(a) || !truth_of(a, t)) continue;
    for (const auto& b : s) {
      if (!keep(b) || truth_of(b, t)) continue;
      pairs += 1.0;
      wins += a.score > b.score ? 1.0 : (a.score == b.score ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

}  // namespace

TEST_SUITE("evaluate") {
  TEST_CASE("inclusion probability") {
    const std::vector<char> all{1, 1, 1, 1}, half{1, 0, 1, 0};
    CHECK(inclusion_probability(all) == 1.0);
    CHECK(inclusion_probability(half) == 0.5);
    RngStream rng(1);
    std::vector<char> bern(5000);
    for (auto& b : bern) b = rng.uniform() < 0.3;
    CHECK(inclusion_probability(bern) == doctest::Approx(0.3).epsilon(0.02 / 0.3));
    CHECK_THROWS_AS(inclusion_probability(std::vector<char>{}), ConfigError);
  }

  TEST_CASE("credible indicator") {
    const std::vector<double> twos(100, 2.0);
    for (double level : default_credible_levels()) CHECK(credible_indicator(twos, level));
    std::vector<double> sym;
    for (int i = -50; i <= 50; ++i) sym.push_back(i);
    CHECK_FALSE(credible_indicator(sym, 0.95));
    RngStream rng(2);
    std::vector<double> n11(10000);
    for (auto& x : n11) x = sample_normal(1.0, 1.0, rng);
    CHECK_FALSE(credible_indicator(n11, 0.95));  // interval about [-0.96, 2.96]
    CHECK(credible_indicator(n11, 0.5));
    CHECK(credible_score(twos, default_credible_levels()) == 1.0);
    CHECK(credible_score(sym, default_credible_levels()) == 0.0);
    const double s = credible_score(n11, default_credible_levels());
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    CHECK_THROWS_AS(credible_indicator(sym, 1.0), ConfigError);
  }

  TEST_CASE("AUC examples") {
    const auto t = make_truth({0, 1}, {});
    std::vector<EffectScore> s{{0, EffectKind::Main, 0, 0.9}, {1, EffectKind::Main, 0, 0.8},
                               {2, EffectKind::Main, 0, 0.1}};
    CHECK(roc_auc(s, t, EffectCategory::Main) == 1.0);
    for (auto& e : s) e.score = 0.4;
    CHECK(roc_auc(s, t, EffectCategory::Main) == 0.5);
    const auto all_true = make_truth({0, 1, 2}, {});
    CHECK_THROWS_AS(roc_auc(s, all_true, EffectCategory::Main), DegenerateError);
    CHECK_THROWS_AS(roc_auc(s, t, EffectCategory::Interaction), DegenerateError);
  }

  TEST_CASE("AUC equals the pairwise count") {
    RngStream rng(3);
    const auto t = make_truth({1, 4}, {{0, 1}, {4, 0}, {6, 1}});
    for (bool coarse : {false, true}) {
      for (int rep = 0; rep < 20; ++rep) {
        const auto s = random_scores(7, 2, rng, coarse);  // 21 effects
        for (auto c : {EffectCategory::Pooled, EffectCategory::Main, EffectCategory::Interaction}) {
          CHECK(roc_auc(s, t, c) == doctest::Approx(brute_force_auc(s, t, c)).epsilon(1e-14));
        }
      }
    }
  }

  TEST_CASE("ROC curve is monotone and its area is the AUC") {
    RngStream rng(4);
    const auto t = make_truth({1, 4}, {{0, 1}, {4, 0}, {6, 1}});
    const auto s = random_scores(7, 2, rng, true);
    const auto roc = roc_curve(s, t);
    REQUIRE(roc.size() >= 2);
    CHECK(roc.front().tpr == 1.0);
    CHECK(roc.front().fpr == 1.0);
    CHECK(roc.back().tpr == 0.0);
    CHECK(roc.back().fpr == 0.0);
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i) {
      CHECK(roc[i].cutoff > roc[i - 1].cutoff);
      CHECK(roc[i].tpr <= roc[i - 1].tpr);
      CHECK(roc[i].fpr <= roc[i - 1].fpr);
      area += 0.5 * (roc[i - 1].fpr - roc[i].fpr) * (roc[i - 1].tpr + roc[i].tpr);
    }
    CHECK(area == doctest::Approx(roc_auc(s, t)));
  }

  TEST_CASE("top-k") {
    // 30 genes, q = 1, 8 mains and 12 interactions.
    std::vector<std::size_t> mains{0, 3, 5, 9, 12, 18, 22, 29};
    std::vector<GeneEnvPair> ints;
    for (std::size_t i = 0; i < 12; ++i) ints.push_back({(i * 7) % 30, 0});
    std::sort(ints.begin(), ints.end());
    const auto t = make_truth(mains, ints);
    RngStream rng(5);
    auto s = random_scores(30, 1, rng, false);
    const auto all = top_k(s, t, 30);
    CHECK(all.mains == 8);
    CHECK(all.interactions == 12);
    CHECK(all.total() == 20);
    CHECK_THROWS_AS(top_k(s, t, 31), ConfigError);
    for (auto& e : s) e.score = truth_of(e, t) ? 2.0 + e.score : e.score;
    const auto sep = top_k(s, t, 20);
    CHECK(sep.mains == 8);
    CHECK(sep.interactions == 12);
    // Ties are broken by gene index.
    for (auto& e : s) e.score = 0.5;
    CHECK(top_k(s, t, 1).mains == 1);  // gene 0
    CHECK(top_k(s, t, 2).mains == 1);  // genes 0 and 1
  }

  TEST_CASE("replicate summaries") {
    const std::vector<double> same{0.9, 0.9, 0.9};
    CHECK(summarize_replicates(same).mean == doctest::Approx(0.9));
    CHECK(summarize_replicates(same).sd == doctest::Approx(0.0));
    const std::vector<double> two{0.0, 1.0};
    CHECK(summarize_replicates(two).mean == 0.5);
    CHECK(summarize_replicates(two).sd == doctest::Approx(0.70710678));
    RngStream rng(6);
    std::vector<double> xs(100);
    double sum = 0.0, sumsq = 0.0;
    for (auto& x : xs) {
      x = 1e3 + rng.uniform();
      sum += x;
    }
    const double mean = sum / 100.0;
    for (double x : xs) sumsq += (x - mean) * (x - mean);
    CHECK(summarize_replicates(xs).sd == doctest::Approx(std::sqrt(sumsq / 99.0)));
    CHECK_THROWS_AS(summarize_replicates(std::vector<double>{1.0}), DegenerateError);
  }

  TEST_CASE("scores from scan summaries") {
    PosteriorSummary ok;
    ok.gene = 3;
    ok.q = 2;
    ok.m = 0;
    ok.effects.resize(5);
    ok.effects[2].inclusion = 0.7;  // beta
    ok.effects[3].inclusion = 0.1;
    ok.effects[4].credible_score = 0.4;  // no spike: falls back to the credible score
    PosteriorSummary failed = ok;
    failed.gene = 4;
    failed.ok = false;
    const std::vector<PosteriorSummary> scan{ok, failed};
    const auto s = effect_scores(scan);
    REQUIRE(s.size() == 6);
    CHECK(s[0].kind == EffectKind::Main);
    CHECK(s[0].score == 0.7);
    CHECK(s[1].score == 0.1);
    CHECK(s[2].env == 1);
    CHECK(s[2].score == 0.4);
    for (std::size_t i = 3; i < 6; ++i) {
      CHECK(s[i].gene == 4);
      CHECK(s[i].score == 0.0);
    }
  }
}
