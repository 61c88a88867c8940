#include "drinf/resample.hpp"

#include <string>

#include "drinf/error.hpp"

namespace drinf {

namespace {

void check_sizes(std::size_t n, std::size_t rn, PlanKind kind) {
    if (n < 2) {
        throw BadSize(kind == PlanKind::pair ? "pair plans need n >= 2"
                                             : "resampling needs n >= 2");
    }
    if (n > 0xFFFFFFFFull) {
        throw BadSize("n exceeds 2^32 - 1");
    }
    if (rn < 1) {
        throw BadSize("R_n must be >= 1");
    }
}

}  // namespace

void fill_plan(Philox& engine, std::size_t n, std::size_t rn, PlanKind kind, ResamplePlan& plan) {
    check_sizes(n, rn, kind);
    plan.kind = kind;
    plan.n = n;
    const auto n32 = static_cast<std::uint32_t>(n);
    plan.first.resize(rn);
    if (kind == PlanKind::single) {
        plan.second.clear();
        for (std::size_t r = 0; r < rn; ++r) {
            plan.first[r] = engine.below(n32);
        }
        return;
    }
    plan.second.resize(rn);
    for (std::size_t r = 0; r < rn; ++r) {
        const std::uint32_t i = engine.below(n32);
        std::uint32_t j = engine.below(n32 - 1);
        if (j >= i) {
            ++j;
        }
        plan.first[r] = i;
        plan.second[r] = j;
    }
}

ResamplePlan draw_plan(std::size_t n, std::size_t rn, PlanKind kind, const StreamId& stream) {
    Philox engine(stream);
    ResamplePlan plan;
    fill_plan(engine, n, rn, kind, plan);
    plan.stream = stream;
    return plan;
}

Enumeration enumerate_uniform(std::size_t n, PlanKind kind) {
    check_sizes(n, 1, kind);
    Enumeration e;
    e.kind = kind;
    const auto n32 = static_cast<std::uint32_t>(n);
    for (std::uint32_t i = 0; i < n32; ++i) {
        if (kind == PlanKind::single) {
            e.first.push_back(i);
            continue;
        }
        for (std::uint32_t j = 0; j < n32; ++j) {
            if (j != i) {
                e.first.push_back(i);
                e.second.push_back(j);
            }
        }
    }
    return e;
}

}  // namespace drinf
