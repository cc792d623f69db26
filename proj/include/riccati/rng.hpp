#pragma once

#include <cstdint>

namespace riccati {

// SplitMix64 mixing step; used to expand a user seed into generator keys.
std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator (10-round Philox-2x64).  A (seed, stream) pair
// names an independent sequence of 2^64 blocks of two 64-bit words, so
// per-path / per-component streams can be created on the fly without any
// coordination or state hand-off.  Reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // Uniform draw strictly inside (0,1): safe under log().
    double uniform();

    // Standard normal via the 128-layer ziggurat rejection method.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint64_t buf_[2];
    int have_ = 0;
};

}  // namespace riccati
