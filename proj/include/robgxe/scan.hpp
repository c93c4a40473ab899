#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "robgxe/model.hpp"
#include "robgxe/summary.hpp"

namespace robgxe {

struct ScanOptions {
  std::uint64_t replicate = 0;
  /// 0 means std::thread::hardware_concurrency().
  std::size_t threads = 1;
  /// Standardize predictors and centre y before scanning.
  bool standardize = true;
  /// Called after each finished gene with (done, total); may run on any worker.
  std::function<void(std::size_t, std::size_t)> progress;
};

struct ScanResult {
  std::vector<PosteriorSummary> genes;  ///< indexed by gene; failed genes have ok == false
  std::size_t failures = 0;
  /// Set when more than 1% of the genes failed.
  bool failed = false;
  std::string error_summary;
};

/// One sampler run per gene on stream (seed, replicate, gene, chain).
/// Output depends only on the inputs, never on the thread count.
ScanResult marginal_scan(const Dataset& data, MethodId method, const Hyperparameters& hp,
                         const GibbsConfig& cfg, std::uint64_t seed, const ScanOptions& opts = {});

struct PrescreenResult {
  std::vector<std::size_t> kept;
  std::vector<std::string> warnings;   ///< one per excluded rank-deficient gene
};

/// Ordinary least squares of the marginal model (with intercept) per gene; a
/// gene is kept when at least `min_hits` of its 1 + q gene-linked coefficients
/// have a two-sided t-test p-value below `p_threshold`.
PrescreenResult prescreen(const Dataset& data, double p_threshold, std::size_t min_hits);

/// Two-sided OLS t-test p-values of the main and interaction coefficients of
/// one gene (1 + q values). Throws DegenerateError on a rank-deficient design.
std::vector<double> marginal_pvalues(const Dataset& data, std::size_t gene);

}  // namespace robgxe
