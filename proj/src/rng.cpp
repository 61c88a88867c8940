#include "drinf/rng.hpp"

#include <cmath>
#include <numbers>

#include "drinf/error.hpp"

namespace drinf {

StreamId stream_for(std::uint64_t master_seed, std::uint64_t replication, Purpose purpose,
                    std::uint64_t lane) {
    if (replication > 0xFFFFFFFFull) {
        throw BadConfig("replication index exceeds 2^32 - 1");
    }
    if (lane > 0xFFFFFFull) {
        throw BadConfig("stream lane exceeds 2^24 - 1");
    }
    return StreamId{master_seed, static_cast<std::uint32_t>(replication), purpose,
                    static_cast<std::uint32_t>(lane)};
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53;
    constexpr std::uint32_t m1 = 0xCD9E8D57;
    constexpr std::uint32_t w0 = 0x9E3779B9;
    constexpr std::uint32_t w1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

Philox::Philox(const StreamId& id, std::uint64_t block_offset)
    : key_{static_cast<std::uint32_t>(id.seed), static_cast<std::uint32_t>(id.seed >> 32)},
      counter_{static_cast<std::uint32_t>(block_offset),
               static_cast<std::uint32_t>(block_offset >> 32), id.replication,
               (id.lane << 8) | static_cast<std::uint32_t>(id.purpose)} {}

void Philox::refill() {
    buf_ = philox4x32_10(counter_, key_);
    pos_ = 0;
    if (++counter_[0] == 0) {
        ++counter_[1];
    }
}

double Philox::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

}  // namespace drinf
