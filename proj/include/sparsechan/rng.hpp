#pragma once

#include <cstdint>

namespace sparsechan {

/// Deterministic random stream built on xoshiro256++ seeded through
/// splitmix64. The generator algorithm is fixed, so a given seed yields
/// the same draw sequence on every platform and build. A stream is
/// single-owner: concurrent users must fork() their own substreams.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// +1 or -1 with equal probability (top bit of one 64-bit draw).
    double rademacher();

    /// Standard normal via Box-Muller (two draws per sample, no caching).
    double gaussian();

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Child stream whose seed is a documented mix of this stream's seed
    /// and the tags; independent of this stream's position.
    RngStream fork(std::uint64_t a, std::uint64_t b = 0) const;

  private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::uint64_t state_[4];
};

} // namespace sparsechan
