#pragma once

#include <cstdint>
#include <random>

namespace isac {

/// Reproducible random stream keyed by (master_seed, stream_index).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both of which
/// are fully specified by the standard, so sequences are identical across
/// platforms. Distributions that the standard leaves implementation-defined
/// are avoided on the draw paths that feed reported numbers.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n). Unbiased (rejection sampling).
    std::uint64_t uniform_index(std::uint64_t n);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Standard normal deviate (Box-Muller on uniform01).
    double normal();

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

}  // namespace isac
