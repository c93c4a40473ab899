#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "robgxe/distributions.hpp"
#include "robgxe/model.hpp"
#include "robgxe/rng.hpp"

namespace robgxe {

enum class GenotypeSetting {
  Expression,   ///< continuous AR1 expression values
  SNPQuartile,  ///< expression cut at its quartiles into 0 / 1 / 2
  SNPLD,        ///< SNPs chained through a pairwise LD haplotype model
};

/// 1-based setting number used on the command line.
GenotypeSetting setting_from_index(int index);
int setting_index(GenotypeSetting s);

struct SimConfig {
  std::size_t n = 200;
  std::size_t p = 500;
  std::size_t q = 4;
  std::size_t m = 3;
  double rho = 0.5;                 // AR1 correlation of the genetic factors
  GenotypeSetting setting = GenotypeSetting::Expression;
  ErrorLaw error;
  std::size_t n_true_main = 8;
  std::size_t n_true_int = 12;
  double maf = 0.3;
  double ld_r = 0.6;
  std::uint64_t seed = 0;
  /// Zero every simulated coefficient (null data sets).
  bool null_model = false;

  /// Throws ConfigError.
  void validate() const;
};

/// Rows i.i.d. N(0, R) with R_jk = rho^|j-k|.
Matrix simulate_ar1(std::size_t n, std::size_t cols, double rho, RngStream& rng);

Matrix simulate_gene_expression(const SimConfig& cfg, RngStream& rng);

/// Per column: below Q1 -> 0, [Q1, Q3] -> 1, above Q3 -> 2 (type-7 sample quartiles).
/// Throws DegenerateError on a constant column, ConfigError with fewer than 4 rows.
Matrix dichotomize_to_snp(const Matrix& expr);

/// Haplotype frequencies of two adjacent loci with minor alleles A and B.
struct HaplotypeFreqs {
  double delta = 0.0;
  double AB = 0.0, Ab = 0.0, aB = 0.0, ab = 0.0;
};

/// Throws ConfigError if any frequency falls outside (0, 1).
HaplotypeFreqs haplotype_frequencies(double q1, double q2, double r);

/// P(next genotype = g' | genotype = g), genotypes coded as minor-allele counts.
using GenotypeTransition = std::array<std::array<double, 3>, 3>;
GenotypeTransition genotype_transition(const HaplotypeFreqs& h);

Matrix simulate_ld_snps(const SimConfig& cfg, RngStream& rng);

/// Genetic matrix for cfg.setting, drawn from `rng`.
Matrix simulate_genotypes(const SimConfig& cfg, RngStream& rng);

/// Gene coordinate reserved for simulation streams, so simulating and scanning
/// with the same seed never reuse a stream.
inline constexpr std::uint64_t kSimulationGene = ~std::uint64_t{0};

inline RngStream simulation_stream(std::uint64_t seed, std::uint64_t replicate) {
  return RngStream(seed, {replicate, kSimulationGene, 0});
}

/// Full data set: E and C AR1(0.5), X per setting, random true positions with
/// Unif[0.1, 0.5] coefficients, y from the marginal-model mean plus an error draw.
Dataset simulate_dataset(const SimConfig& cfg, RngStream& rng);

}  // namespace robgxe
