#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "drinf/rng.hpp"

namespace drinf {

enum class PlanKind { single, pair };

/// R_n index draws standing in for R_n uniform permutations.
///
/// The statistics only ever read pi_r(1) (mean-type) or (pi_r(1), pi_r(2))
/// (U-type) of each permutation, and those coordinates of a uniform
/// permutation are a uniform index or a uniform ordered pair of distinct
/// indices. Drawing them directly is an exact reduction.
struct ResamplePlan {
    PlanKind kind = PlanKind::single;
    std::size_t n = 0;
    // single: first[r] only. pair: (first[r], second[r]) with first != second.
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> second;
    StreamId stream{};

    std::size_t size() const { return first.size(); }
};

// Throws BadSize for n < 2, rn < 1, or n >= 2^32.
ResamplePlan draw_plan(std::size_t n, std::size_t rn, PlanKind kind, const StreamId& stream);

/// Refill `plan` in place from an engine; used by loops that draw many plans
/// and want to keep the buffers.
void fill_plan(Philox& engine, std::size_t n, std::size_t rn, PlanKind kind, ResamplePlan& plan);

/// Block offset for sub-plan `index` of one stream. Sub-plans are spaced
/// 2^32 blocks apart, far more than any plan consumes.
constexpr std::uint64_t subplan_offset(std::uint64_t index) { return index << 32; }

/// Exact uniform law over single indices (n entries) or ordered distinct
/// pairs (n(n-1) entries). Each entry carries probability 1 / size().
struct Enumeration {
    PlanKind kind = PlanKind::single;
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> second;

    std::size_t size() const { return first.size(); }
    double weight() const { return 1.0 / static_cast<double>(first.size()); }
};

Enumeration enumerate_uniform(std::size_t n, PlanKind kind);

}  // namespace drinf
