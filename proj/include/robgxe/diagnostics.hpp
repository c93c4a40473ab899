#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robgxe {

/// Draws of one scalar parameter from M chains of equal length N.
class ChainMatrix {
 public:
  ChainMatrix() = default;
  /// Throws ConfigError unless M >= 2, N >= 10 and all chains have length N.
  explicit ChainMatrix(std::vector<std::vector<double>> chains);

  std::size_t chains() const { return chains_.size(); }
  std::size_t length() const { return chains_.empty() ? 0 : chains_.front().size(); }
  std::span<const double> chain(std::size_t c) const { return chains_.at(c); }

 private:
  std::vector<std::vector<double>> chains_;
};

struct PsrfResult {
  double psrf = 1.0;   ///< sqrt(((N-1)/N W + B/N) / W)
  double upper = 1.0;  ///< 97.5% point of the Brooks-Gelman sampling distribution
};

/// Gelman-Rubin potential scale reduction factor. Throws DegenerateError when
/// the within-chain variance is zero.
PsrfResult psrf(const ChainMatrix& chains);

/// Same statistic on the first `prefix` draws of each chain (prefix >= 2).
PsrfResult psrf_prefix(const ChainMatrix& chains, std::size_t prefix);

struct PsrfTracePoint {
  std::size_t iteration = 0;  ///< prefix length
  double psrf = 0.0;          ///< NaN when the prefix has zero within-chain variance
  double upper = 0.0;
};

/// PSRF on growing prefixes stride, 2*stride, ..., floor(N/stride)*stride.
std::vector<PsrfTracePoint> psrf_trace(const ChainMatrix& chains, std::size_t stride);

/// Cut-off used to declare convergence.
inline constexpr double kPsrfThreshold = 1.1;

/// Spike-and-slab coefficients: PSRF of the slab draws only (zeros dropped,
/// chains truncated to the shortest remaining length) and of the 0/1 slab
/// indicator sequence.
struct SpikeDiagnostic {
  PsrfResult slab;
  PsrfResult indicator;
  bool slab_defined = false;
  bool indicator_defined = false;
};

SpikeDiagnostic psrf_spike(std::span<const std::vector<double>> draws,
                           std::span<const std::vector<char>> active);

}  // namespace robgxe
