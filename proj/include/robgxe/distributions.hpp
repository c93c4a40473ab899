#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "robgxe/rng.hpp"

namespace robgxe {

// Scalar generators. Every parameter must be finite and strictly positive
// where a scale, rate or shape is expected; otherwise DomainError.

double sample_normal(double mean, double variance, RngStream& rng);
/// Gamma with shape/rate parameterisation (mean = shape / rate).
double sample_gamma(double shape, double rate, RngStream& rng);
/// Inverse-Gamma(shape, scale): the reciprocal of Gamma(shape, rate = scale).
double sample_inverse_gamma(double shape, double scale, RngStream& rng);
double sample_beta(double a, double b, RngStream& rng);
double sample_exponential(double rate, RngStream& rng);
/// Standard Cauchy as a ratio of two independent standard normals.
double sample_cauchy(RngStream& rng);

/// Inverse-Gaussian IG(mu, lambda): mean mu, variance mu^3 / lambda.
/// Michael, Schucany and Haas transformation with one accept/flip step.
double sample_inverse_gaussian(double mu, double lambda, RngStream& rng);

/// The five residual laws used by the simulation engine.
enum class ErrorVariant {
  Normal01,    ///< N(0, 1)
  StudentT2,   ///< t with 2 degrees of freedom
  LogNormal02, ///< log-normal, meanlog 0, sdlog 2
  Mix90N10C,   ///< 0.9 N(0,1) + 0.1 Cauchy(0,1)
  Mix80N20C,   ///< 0.8 N(0,1) + 0.2 Cauchy(0,1)
};

struct ErrorLaw {
  ErrorVariant variant = ErrorVariant::Normal01;

  /// Weight of the normal component; 0.9 / 0.8 for the contaminated laws, 1 otherwise.
  double normal_weight() const;
  std::string name() const;

  /// Maps the 1-based error number used on the command line (1..5).
  static ErrorLaw from_index(int index);
  int index() const;
};

std::vector<double> sample_error(const ErrorLaw& law, std::size_t n, RngStream& rng);

}  // namespace robgxe
