#include "robgxe/distributions.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "robgxe/errors.hpp"

namespace robgxe {

namespace {

[[noreturn, gnu::cold, gnu::noinline]] void throw_not_positive(double value, const char* what) {
  throw DomainError(std::string(what) + " must be finite and > 0, got " + std::to_string(value));
}

inline void require_positive(double value, const char* what) {
  if (!(value > 0.0 && value <= std::numeric_limits<double>::max())) [[unlikely]] throw_not_positive(value, what);
}

}  // namespace

double sample_normal(double mean, double variance, RngStream& rng) {
  if (!std::isfinite(mean)) throw DomainError("normal mean must be finite");
  require_positive(variance, "normal variance");
  return mean + std::sqrt(variance) * rng.standard_normal();
}

double sample_gamma(double shape, double rate, RngStream& rng) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng);
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  require_positive(shape, "inverse-gamma shape");
  require_positive(scale, "inverse-gamma scale");
  std::gamma_distribution<double> dist(shape, 1.0 / scale);
  return 1.0 / dist(rng);
}

double sample_beta(double a, double b, RngStream& rng) {
  require_positive(a, "beta a");
  require_positive(b, "beta b");
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x / (x + y);
}

double sample_exponential(double rate, RngStream& rng) {
  require_positive(rate, "exponential rate");
  return -std::log(rng.uniform()) / rate;
}

double sample_cauchy(RngStream& rng) {
  const double num = rng.standard_normal();
  double den = rng.standard_normal();
  while (den == 0.0) den = rng.standard_normal();
  return num / den;
}

double sample_inverse_gaussian(double mu, double lambda, RngStream& rng) {
  require_positive(mu, "inverse-gaussian mu");
  require_positive(lambda, "inverse-gaussian lambda");
  const double z = rng.standard_normal();
  const double y = z * z;
  const double muy = mu * y;
  // Smaller root of the MSH quadratic, rationalised so it does not cancel for large mu*y.
  const double x = mu * (2.0 * lambda) / (2.0 * lambda + muy + std::sqrt(muy * (muy + 4.0 * lambda)));
  if (rng.uniform() <= mu / (mu + x)) return x;
  return mu * mu / x;
}

double ErrorLaw::normal_weight() const {
  switch (variant) {
    case ErrorVariant::Mix90N10C: return 0.9;
    case ErrorVariant::Mix80N20C: return 0.8;
    default: return 1.0;
  }
}

std::string ErrorLaw::name() const {
  switch (variant) {
    case ErrorVariant::Normal01: return "N(0,1)";
    case ErrorVariant::StudentT2: return "t(2)";
    case ErrorVariant::LogNormal02: return "LogNormal(0,2)";
    case ErrorVariant::Mix90N10C: return "0.9N(0,1)+0.1Cauchy(0,1)";
    case ErrorVariant::Mix80N20C: return "0.8N(0,1)+0.2Cauchy(0,1)";
  }
  throw ConfigError("unknown error variant");
}

ErrorLaw ErrorLaw::from_index(int index) {
  switch (index) {
    case 1: return {ErrorVariant::Normal01};
    case 2: return {ErrorVariant::StudentT2};
    case 3: return {ErrorVariant::LogNormal02};
    case 4: return {ErrorVariant::Mix90N10C};
    case 5: return {ErrorVariant::Mix80N20C};
  }
  throw ConfigError("error law index must be in 1..5, got " + std::to_string(index));
}

int ErrorLaw::index() const { return static_cast<int>(variant) + 1; }

std::vector<double> sample_error(const ErrorLaw& law, std::size_t n, RngStream& rng) {
  if (n == 0) throw ConfigError("sample_error: n must be >= 1");
  std::vector<double> out(n);
  switch (law.variant) {
    case ErrorVariant::Normal01:
      for (auto& e : out) e = rng.standard_normal();
      break;
    case ErrorVariant::StudentT2: {
      std::student_t_distribution<double> t(2.0);
      for (auto& e : out) e = t(rng);
      break;
    }
    case ErrorVariant::LogNormal02:
      for (auto& e : out) e = std::exp(2.0 * rng.standard_normal());
      break;
    case ErrorVariant::Mix90N10C:
    case ErrorVariant::Mix80N20C: {
      const double w = law.normal_weight();
      for (auto& e : out) e = rng.uniform() < w ? rng.standard_normal() : sample_cauchy(rng);
      break;
    }
    default:
      throw ConfigError("unknown error variant");
  }
  return out;
}

}  // namespace robgxe
