#include "robgxe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

#include "robgxe/errors.hpp"

namespace robgxe {

ChainMatrix::ChainMatrix(std::vector<std::vector<double>> chains) : chains_(std::move(chains)) {
  if (chains_.size() < 2) throw ConfigError("PSRF needs at least 2 chains");
  const auto n = chains_.front().size();
  if (n < 10) throw ConfigError("PSRF needs at least 10 draws per chain");
  for (const auto& c : chains_) {
    if (c.size() != n) throw ConfigError("PSRF chains must have equal length");
  }
}

namespace {

double sample_cov(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / (n - 1.0);
}

/// 0.975 quantile of F(df1, df2); df2 may be infinite.
double f_quantile(double df1, double df2) {
  constexpr double p = 0.975;
  if (!std::isfinite(df2) || df2 > 1e10) {
    boost::math::chi_squared chi(df1);
    return boost::math::quantile(chi, p) / df1;
  }
  boost::math::fisher_f f(df1, df2);
  return boost::math::quantile(f, p);
}

PsrfResult compute(const ChainMatrix& cm, std::size_t len) {
  const std::size_t M = cm.chains();
  const double N = static_cast<double>(len);
  const double Md = static_cast<double>(M);
  std::vector<double> means(M), vars(M);
  for (std::size_t c = 0; c < M; ++c) {
    const auto ch = cm.chain(c).first(len);
    double mean = 0;
    for (double x : ch) mean += x;
    mean /= N;
    double ss = 0;
    for (double x : ch) ss += (x - mean) * (x - mean);
    means[c] = mean;
    vars[c] = ss / (N - 1.0);
  }
  double grand = 0;
  for (double m : means) grand += m;
  grand /= Md;
  double between = 0;
  for (double m : means) between += (m - grand) * (m - grand);
  const double B = N * between / (Md - 1.0);
  double W = 0;
  for (double v : vars) W += v;
  W /= Md;
  if (!(W > 0.0)) throw DegenerateError("PSRF undefined: zero within-chain variance");

  PsrfResult out;
  out.psrf = std::sqrt(((N - 1.0) / N * W + B / N) / W);

  // Upper limit: R^2 = (N-1)/N + (1 + 1/M) B / (N W) with B/W replaced by its
  // F(M-1, df_W) 97.5% point, df_W = 2 W^2 / var(W).
  const double var_w = sample_cov(vars, vars) / Md;
  const double df_w = var_w > 0.0 ? 2.0 * W * W / var_w : std::numeric_limits<double>::infinity();
  const double r2_fixed = (N - 1.0) / N;
  const double r2_random = (1.0 + 1.0 / Md) * (1.0 / N) * (B / W);
  out.upper = std::sqrt(r2_fixed + f_quantile(Md - 1.0, df_w) * r2_random);
  return out;
}

}  // namespace

PsrfResult psrf(const ChainMatrix& chains) { return compute(chains, chains.length()); }

PsrfResult psrf_prefix(const ChainMatrix& chains, std::size_t prefix) {
  if (prefix < 2 || prefix > chains.length()) throw ConfigError("PSRF prefix out of range");
  return compute(chains, prefix);
}

std::vector<PsrfTracePoint> psrf_trace(const ChainMatrix& chains, std::size_t stride) {
  if (stride == 0) throw ConfigError("PSRF trace stride must be >= 1");
  // The full-length point follows psrf()'s error contract.
  const PsrfResult full = psrf(chains);
  std::vector<PsrfTracePoint> out;
  const std::size_t count = chains.length() / stride;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const std::size_t len = i * stride;
    PsrfTracePoint pt{len, std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN()};
    if (len == chains.length()) {
      pt.psrf = full.psrf;
      pt.upper = full.upper;
    } else if (len >= 2) {
      try {
        const auto r = compute(chains, len);
        pt.psrf = r.psrf;
        pt.upper = r.upper;
      } catch (const DegenerateError&) {
      }
    }
    out.push_back(pt);
  }
  return out;
}

SpikeDiagnostic psrf_spike(std::span<const std::vector<double>> draws,
                           std::span<const std::vector<char>> active) {
  if (draws.size() != active.size()) throw ConfigError("psrf_spike: draws/indicators mismatch");
  SpikeDiagnostic out;
  std::vector<std::vector<double>> slab(draws.size()), ind(draws.size());
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = 0; c < draws.size(); ++c) {
    if (draws[c].size() != active[c].size()) throw ConfigError("psrf_spike: length mismatch");
    for (std::size_t i = 0; i < draws[c].size(); ++i) {
      ind[c].push_back(active[c][i] ? 1.0 : 0.0);
      if (active[c][i]) slab[c].push_back(draws[c][i]);
    }
    shortest = std::min(shortest, slab[c].size());
  }
  try {
    out.indicator = psrf(ChainMatrix(std::move(ind)));
    out.indicator_defined = true;
  } catch (const Error&) {
  }
  if (shortest >= 10 && shortest != std::numeric_limits<std::size_t>::max()) {
    for (auto& s : slab) s.resize(shortest);
    try {
      out.slab = psrf(ChainMatrix(std::move(slab)));
      out.slab_defined = true;
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace robgxe
