#pragma once

#include <cstdint>
#include <random>

namespace fracstable {

/// Reproducible uniform source identified by (seed, stream id).
///
/// Equal identities give equal sequences on every platform: the engine is
/// mt19937_64 seeded through std::seed_seq, both fully specified by the
/// standard. Uniforms are drawn from (0,1] so log(u) is always finite.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Uniform variate in (0,1] with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  std::uint64_t next_u64() noexcept { return engine_(); }

  /// Independent child stream; the same index always yields the same child.
  RngStream split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace fracstable
