#pragma once

#include <array>
#include <cstdint>

namespace spectail {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: maps a
/// 128-bit counter and a 64-bit key to 128 pseudo-random bits.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Domain tags keep streams used by different subsystems disjoint even when
// they share a master seed.
enum class StreamTag : std::uint64_t {
    matrix_entry = 1,
    profile_mask = 2,
    iter_start = 3,
    net_build = 4,
    net_probe = 5,
    lemma_trial = 6,
    unit_vector = 7,
    generic = 8,
};

/// Counter-based random stream. The state is (key, stream ids, block index);
/// a stream with identical construction arguments always yields the same
/// sequence, independent of which thread consumes it.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamTag tag, std::uint32_t a = 0, std::uint32_t b = 0,
                 std::uint32_t c = 0) noexcept;

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller (one output per call).
    double normal() noexcept;
    /// Exponential with mean 1.
    double exponential() noexcept;
    /// +1 or -1 with probability 1/2 each.
    double sign() noexcept { return (next_u32() & 1u) ? 1.0 : -1.0; }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter counter_;
    Philox4x32::Counter block_{};
    int used_ = 4;
};

}  // namespace spectail
