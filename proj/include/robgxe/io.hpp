#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robgxe/evaluate.hpp"
#include "robgxe/model.hpp"
#include "robgxe/summary.hpp"

namespace robgxe {

namespace fs = std::filesystem;

// Dataset CSV: header `y,E1..Eq,C1..Cm,X1..Xp`. Columns are assigned by the
// prefix of their header name; within a prefix the file order is kept.
// Truth CSV: `kind,gene,env,value` with 1-based ids and "-" for "not
// applicable"; kind is main, interaction, env or clinical (the clinical
// index goes in the env column).

/// With `genotype`, every X cell must be 0, 1 or 2. Errors are ParseError
/// with the 1-based (row, column) of the offending cell; the header is row 1.
Dataset load_dataset(const fs::path& path, bool genotype = false);
void write_dataset(const Dataset& data, const fs::path& path);

GroundTruth load_truth(const fs::path& path);
void write_truth(const GroundTruth& truth, const fs::path& path);

/// Long format, one row per gene-linked effect:
/// gene,kind,env,median,score,lower95,upper95,psrf. Failed genes get score 0
/// and NA elsewhere.
void write_results(std::span<const PosteriorSummary> scan, const fs::path& path);
std::vector<EffectScore> load_scores(const fs::path& path);

/// Every effect of one fit, including environment and clinical coefficients.
void write_fit_summary(const PosteriorSummary& s, const fs::path& path);

/// Retained draws of one chain, one column per coefficient.
std::vector<std::string> draw_column_names(std::size_t q, std::size_t m);
void write_draws(const ChainTrace& trace, const fs::path& path);

/// A set of chains read back from draws_chain*.csv (sorted by chain number).
struct DrawSet {
  std::vector<std::string> names;
  std::vector<Matrix> chains;   ///< each N x names.size()
};
DrawSet load_draws(const fs::path& dir);

/// Plain `key = value` lines; `[section]` headers prefix later keys with
/// "section."; `#` starts a comment.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap load_config(const fs::path& path);

/// Writes `key = value` lines in the given order.
void write_manifest(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& entries);

/// Creates the directory (and parents) or throws ConfigError.
void ensure_directory(const fs::path& dir);

}  // namespace robgxe
