#pragma once

#include <cstdint>
#include <random>

namespace robgxe {

/// Identifies one independent random stream inside a run.
struct StreamId {
  std::uint64_t replicate = 0;
  std::uint64_t gene = 0;
  std::uint64_t chain = 0;

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the engine behind (master seed, stream id). Each coordinate is
/// folded through the mixer so that neighbouring ids land far apart.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, const StreamId& id) noexcept {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ id.replicate);
  h = mix64(h ^ (id.gene + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (id.chain + 0x8cb92ba72f3d8dd7ULL));
  return h;
}

/// A reproducible random stream. Value type: copying forks the stream state,
/// so two copies produce the same sequence. Never share one between threads.
class RngStream {
 public:
  using engine_type = std::mt19937_64;
  using result_type = engine_type::result_type;

  explicit RngStream(std::uint64_t seed = 0, StreamId id = {})
      : seed_(seed), id_(id), engine_(derive_stream_seed(seed, id)) {}

  static constexpr result_type min() { return engine_type::min(); }
  static constexpr result_type max() { return engine_type::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    // 53 random mantissa bits, shifted by half an ulp to exclude 0.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double standard_normal() { return normal_(engine_); }

  std::uint64_t seed() const noexcept { return seed_; }
  const StreamId& id() const noexcept { return id_; }

 private:
  std::uint64_t seed_;
  StreamId id_;
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace robgxe
