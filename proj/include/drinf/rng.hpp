#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "drinf/error.hpp"

namespace drinf {

/// What a random stream is used for. Each purpose gets its own stream so that
/// e.g. the data draw of replication r never shares bits with its permutation
/// draw.
enum class Purpose : std::uint8_t {
    data = 0,
    permutation = 1,
    critical_value = 2,
    calibration = 3,
};

/// Identity of one independent random stream.
///
/// The triple (replication, purpose, lane) is packed verbatim into the upper
/// 64 bits of the Philox counter and the master seed is the key, so distinct
/// ids address disjoint counter ranges of the same keyed bijection.
struct StreamId {
    std::uint64_t seed = 0;
    std::uint32_t replication = 0;
    Purpose purpose = Purpose::data;
    std::uint32_t lane = 0;  // < 2^24

    friend bool operator==(const StreamId&, const StreamId&) = default;
};

// Throws BadConfig when replication >= 2^32 or lane >= 2^24.
StreamId stream_for(std::uint64_t master_seed, std::uint64_t replication, Purpose purpose,
                    std::uint64_t lane = 0);

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based engine over one StreamId. Satisfies
/// std::uniform_random_bit_generator with 32-bit output.
///
/// Block position (the low 64 counter bits) starts at `block_offset`, which
/// allows deterministic skip-ahead: sub-stream k of a stream can start at
/// block k * 2^32 regardless of what other sub-streams consumed.
class Philox {
  public:
    using result_type = std::uint32_t;

    explicit Philox(const StreamId& id, std::uint64_t block_offset = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            refill();
        }
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = (*this)();
        return (hi << 32) | (*this)();
    }

    // Uniform on (0,1), 53-bit resolution, never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1, exact (Lemire rejection).
    std::uint32_t below(std::uint32_t n) {
        std::uint64_t m = static_cast<std::uint64_t>((*this)()) * n;
        auto low = static_cast<std::uint32_t>(m);
        if (low < n) {
            const std::uint32_t threshold = (0u - n) % n;
            while (low < threshold) {
                m = static_cast<std::uint64_t>((*this)()) * n;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    // Standard normal via Box-Muller; the second variate is cached.
    double normal();

    bool bernoulli(double p) { return uniform() < p; }

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace drinf
