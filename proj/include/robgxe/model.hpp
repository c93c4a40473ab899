#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "robgxe/rng.hpp"

namespace robgxe {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// xi2^2 of the Laplace scale mixture at the median (theta = 0.5).
inline constexpr double kXi2Squared = 8.0;

/// A true interaction position: gene j modified by environment factor k.
struct GeneEnvPair {
  std::size_t gene = 0;
  std::size_t env = 0;
  friend auto operator<=>(const GeneEnvPair&, const GeneEnvPair&) = default;
};

struct GroundTruth {
  std::vector<std::size_t> main_idx;          // genes with a nonzero main effect
  std::vector<double> main_value;
  std::vector<GeneEnvPair> int_idx;           // nonzero G x E interactions
  std::vector<double> int_value;
  std::vector<double> alpha;                  // environment coefficients
  std::vector<double> gamma;                  // clinical coefficients

  bool is_true_main(std::size_t gene) const;
  bool is_true_interaction(std::size_t gene, std::size_t env) const;
  /// Throws ConfigError unless every index is within (p, q) and positions are distinct.
  void validate(std::size_t p, std::size_t q) const;
};

/// Response y (n), environment E (n x q), clinical C (n x m), genetic X (n x p).
struct Dataset {
  Vector y;
  Matrix E;
  Matrix C;
  Matrix X;
  std::optional<GroundTruth> truth;

  std::size_t n() const { return static_cast<std::size_t>(y.size()); }
  std::size_t q() const { return static_cast<std::size_t>(E.cols()); }
  std::size_t m() const { return static_cast<std::size_t>(C.cols()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }

  /// Dimensions agree, entries finite, n >= q + m + 2. Throws ConfigError.
  void validate() const;
};

/// Location used to centre the response. The LAD models assume a zero error
/// median and have no intercept, so they centre y at its median.
enum class ResponseCentre { Mean, Median };

/// Columns centred and scaled to unit (sample) variance; y centred.
/// Constant columns are centred to zero and left unscaled.
Dataset standardize(const Dataset& data, ResponseCentre centre = ResponseCentre::Mean);

/// The per-gene view fed to one sampler: y, E, C plus x_j and w = x_j o E.
struct MarginalDesign {
  std::size_t gene = 0;
  Vector y;
  Matrix E;
  Matrix C;
  Vector x;
  Matrix w;

  std::size_t n() const { return static_cast<std::size_t>(y.size()); }
  std::size_t q() const { return static_cast<std::size_t>(E.cols()); }
  std::size_t m() const { return static_cast<std::size_t>(C.cols()); }
};

MarginalDesign build_marginal_design(const Dataset& data, std::size_t gene);

/// Fixed prior constants. BLSS / BL constants live in `gauss`.
struct Hyperparameters {
  double a = 1.0, b = 1.0;          // tau ~ Gamma(a, b)
  double c1 = 1.0, d1 = 1.0;        // phi1^2 ~ Gamma(c1, d1)
  double c2 = 1.0, d2 = 1.0;        // phi2^2 ~ Gamma(c2, d2)
  double r1 = 1.0, u1 = 1.0;        // pi1 ~ Beta(r1, u1)
  double r2 = 1.0, u2 = 1.0;        // pi2 ~ Beta(r2, u2)
  double alpha0 = 100.0;            // alpha_k ~ N(0, alpha0)
  double gamma0 = 100.0;            // gamma_t ~ N(0, gamma0)

  struct Gaussian {
    double r_c = 1.0, u_c = 1.0, r_e = 1.0, u_e = 1.0;  // pi_c, pi_e Betas
    double a_c = 1.0, b_c = 1.0, a_e = 1.0, b_e = 1.0;  // lambda_c^2, lambda_e^2 Gammas
    double s = 1.0, h = 1.0;                            // sigma^2 ~ Inverse-Gamma(s, h) (BLSS)
    /// Diagonals of the prior covariances of alpha and gamma. A single entry
    /// is broadcast to every coefficient.
    std::vector<double> sigma_alpha0{100.0};
    std::vector<double> sigma_gamma0{100.0};
  } gauss;

  /// All constants finite and > 0. Throws ConfigError.
  void validate() const;
  /// Prior variance of alpha_k / gamma_t under the Gaussian-likelihood models.
  double gauss_alpha_var(std::size_t k) const;
  double gauss_gamma_var(std::size_t t) const;
};

/// Current values of every sampled quantity of one chain.
///
/// The LAD samplers use every field except `sigma2`. The Gaussian-likelihood
/// samplers reuse the slab scales: `s1` holds tau_c^2, `s2[k]` holds tau_ek^2,
/// `phi1_sq` / `phi2_sq` hold lambda_c^2 / lambda_e^2, `pi1` / `pi2` hold
/// pi_c / pi_e, and `v` / `tau` are unused.
struct ChainState {
  Vector alpha;
  Vector gamma;
  double beta = 0.0;
  Vector eta;
  bool beta_active = false;             // slab membership of beta
  std::vector<char> eta_active;         // slab membership of each eta_k
  Vector v;
  double s1 = 1.0;
  Vector s2;
  double tau = 1.0;
  double phi1_sq = 1.0;
  double phi2_sq = 1.0;
  double pi1 = 0.5;
  double pi2 = 0.5;
  double sigma2 = 1.0;

  /// Positivity and range invariants.
  bool valid() const;

  /// Lossless text form (one `key = values` line per field).
  std::string serialize() const;
  static ChainState deserialize(const std::string& text);

  friend bool operator==(const ChainState& a, const ChainState& b);
};

enum class InitMode {
  Neutral,       ///< coefficients 0, scales 1, pi 0.5
  Overdispersed, ///< coefficients drawn N(0, 2^2), for multi-chain PSRF runs
};

ChainState init_chain(const MarginalDesign& design, const Hyperparameters& hp, RngStream& rng,
                      InitMode mode = InitMode::Neutral);

}  // namespace robgxe
