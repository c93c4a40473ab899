#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robgxe/model.hpp"

namespace robgxe {

enum class MethodId { LADBLSS, LADBL, BLSS, BL };

inline constexpr MethodId kAllMethods[] = {MethodId::LADBLSS, MethodId::LADBL, MethodId::BLSS,
                                           MethodId::BL};

constexpr bool has_spike(MethodId m) { return m == MethodId::LADBLSS || m == MethodId::BLSS; }
constexpr bool is_robust(MethodId m) { return m == MethodId::LADBLSS || m == MethodId::LADBL; }
std::string to_string(MethodId m);
/// Case-insensitive; throws ConfigError for unknown names.
MethodId parse_method(std::string_view name);

/// Parameter blocks that a sweep may hold fixed (bit mask for GibbsConfig::frozen).
enum Block : std::uint32_t {
  kLatent = 1u << 0,    ///< v (LAD)
  kScale = 1u << 1,     ///< tau (LAD) or sigma^2 (Gaussian)
  kAlpha = 1u << 2,
  kGamma = 1u << 3,
  kBeta = 1u << 4,
  kEta = 1u << 5,
  kSlabScale = 1u << 6, ///< s1, s2 / tau_c^2, tau_ek^2
  kRate = 1u << 7,      ///< phi^2 / lambda^2
  kMix = 1u << 8,       ///< pi1, pi2 / pi_c, pi_e
};

/// {0.50, 0.55, ..., 0.95, 0.99}
std::vector<double> default_credible_levels();

struct GibbsConfig {
  std::size_t n_iter = 10000;
  std::size_t burn_in = 5000;
  std::size_t thin = 1;
  std::size_t n_chains = 1;
  /// Keep retained draws inside the returned summary.
  bool keep_draws = true;
  /// Start chains overdispersed. Multi-chain runs always do.
  bool overdispersed = false;
  std::uint32_t frozen = 0;
  std::vector<double> credible_levels = default_credible_levels();

  void validate() const;
  /// Draws retained per chain: floor((n_iter - burn_in) / thin).
  std::size_t retained() const { return (n_iter - burn_in) / thin; }
};

enum class EffectKind { Environment, Clinical, Main, Interaction };
std::string to_string(EffectKind k);

/// Retained draws of every regression coefficient of one chain.
/// Columns: alpha_1..q, gamma_1..m, beta, eta_1..q.
struct ChainTrace {
  Matrix draws;               // retained x d
  std::vector<char> active;   // retained x d, column-major; 1 when the draw is in the slab
  std::size_t q = 0, m = 0;

  std::size_t rows() const { return static_cast<std::size_t>(draws.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(draws.cols()); }
  char is_active(std::size_t row, std::size_t col) const { return active[col * rows() + row]; }
};

struct EffectSummary {
  EffectKind kind = EffectKind::Main;
  std::size_t index = 0;             ///< env / clinical index; env index for interactions
  std::vector<double> draws;         ///< pooled retained draws (empty unless kept)
  std::vector<char> active;
  double median = 0.0;
  double mean = 0.0;
  double lower95 = 0.0, upper95 = 0.0;
  /// Fraction of retained draws in the slab; NaN for methods without a spike.
  double inclusion = std::numeric_limits<double>::quiet_NaN();
  /// Mean over the credible-level grid of "interval excludes zero".
  double credible_score = 0.0;
  std::vector<std::pair<double, double>> intervals;   ///< one per credible level
  double psrf = std::numeric_limits<double>::quiet_NaN();
  double psrf_upper = std::numeric_limits<double>::quiet_NaN();

  /// Identification score: inclusion probability when defined, else credible score.
  double score() const;
};

struct PosteriorSummary {
  MethodId method = MethodId::LADBLSS;
  std::size_t gene = 0;
  std::size_t retained = 0;          ///< per chain
  std::size_t chains = 0;
  std::vector<double> credible_levels;
  std::vector<EffectSummary> effects;  ///< alpha.., gamma.., beta, eta..
  std::size_t q = 0, m = 0;
  bool ok = true;
  std::string error;

  const EffectSummary& main() const { return effects.at(q + m); }
  const EffectSummary& interaction(std::size_t k) const { return effects.at(q + m + 1 + k); }
  const EffectSummary& alpha(std::size_t k) const { return effects.at(k); }
  const EffectSummary& gamma(std::size_t t) const { return effects.at(q + t); }
};

// Order statistics shared by the summaries and the evaluation metrics.

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double prob);
double median(std::span<const double> values);
/// Equal-tailed interval at `level`.
std::pair<double, double> credible_interval(std::span<const double> values, double level);

/// Pools per-chain traces into a summary. Computes PSRF when there are >= 2 chains.
PosteriorSummary summarize(std::span<const ChainTrace> chains, MethodId method, std::size_t gene,
                           const GibbsConfig& cfg);

}  // namespace robgxe
