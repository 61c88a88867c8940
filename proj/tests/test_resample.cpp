#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "drinf/resample.hpp"

using namespace drinf;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using W = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream_for is injective on its labels") {
    CHECK_FALSE(stream_for(42, 0, Purpose::data) == stream_for(42, 0, Purpose::permutation));
    CHECK_FALSE(stream_for(42, 1, Purpose::data) == stream_for(42, 2, Purpose::data));
    CHECK_FALSE(stream_for(42, 1, Purpose::data) == stream_for(43, 1, Purpose::data));
    CHECK_THROWS_AS(stream_for(1, std::uint64_t{1} << 32, Purpose::data), BadConfig);
    CHECK_THROWS_AS(stream_for(1, 0, Purpose::data, std::uint64_t{1} << 24), BadConfig);

    Philox a(stream_for(42, 0, Purpose::data));
    Philox b(stream_for(42, 0, Purpose::permutation));
    int equal = 0;
    for (int i = 0; i < 100; ++i) equal += (a() == b());
    CHECK(equal < 3);
}

TEST_CASE("streams are pairwise uncorrelated") {
    constexpr int streams = 1000;
    constexpr int draws = 1000;
    Eigen::MatrixXd u(draws, streams);
    for (int s = 0; s < streams; ++s) {
        Philox rng(stream_for(42, static_cast<std::uint64_t>(s), Purpose::data));
        for (int i = 0; i < draws; ++i) u(i, s) = rng.uniform();
    }
    u.rowwise() -= u.colwise().mean();
    u.array().rowwise() /= u.colwise().norm().array();
    const Eigen::MatrixXd rho = u.transpose() * u;

    // Under independence each rho is ~N(0, 1/draws): |rho| >= 0.1 is a 3.2 sd
    // event, so some of the 499500 pairs cross it by chance. Check the tail
    // count and the mean square instead of a hard per-pair bound.
    int above = 0;
    double max_abs = 0.0;
    double sumsq = 0.0;
    for (int a = 0; a < streams; ++a) {
        for (int b = a + 1; b < streams; ++b) {
            const double r = std::abs(rho(a, b));
            above += r >= 0.1;
            max_abs = std::max(max_abs, r);
            sumsq += r * r;
        }
    }
    const double pairs = streams * (streams - 1) / 2.0;
    const double tail = 2 * 0.5 * std::erfc(0.1 * std::sqrt(double(draws)) / std::sqrt(2.0));
    CHECK(above < pairs * tail * 1.3);
    CHECK(max_abs < 0.2);
    CHECK(sumsq / pairs == doctest::Approx(1.0 / (draws - 1)).epsilon(0.02));
}

TEST_CASE("uniform and normal output ranges") {
    Philox rng(stream_for(5, 0, Purpose::data));
    double sum = 0, sumsq = 0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::abs(sum / n) < 5 / std::sqrt(double(n)));
    CHECK(std::abs(sumsq / n - 1.0) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("below is exact for small ranges") {
    Philox rng(stream_for(6, 0, Purpose::data));
    std::vector<int> counts(3, 0);
    constexpr int n = 300000;
    for (int i = 0; i < n; ++i) ++counts[rng.below(3)];
    for (int c : counts) CHECK(std::abs(c - n / 3.0) < 5 * std::sqrt(n * (1.0 / 3) * (2.0 / 3)));
    for (int i = 0; i < 1000; ++i) CHECK(rng.below(1) == 0u);
}

TEST_CASE("draw_plan preconditions") {
    const auto s = stream_for(1, 0, Purpose::permutation);
    CHECK_THROWS_AS(draw_plan(1, 5, PlanKind::pair, s), BadSize);
    CHECK_THROWS_AS(draw_plan(1, 5, PlanKind::single, s), BadSize);
    CHECK_THROWS_AS(draw_plan(5, 0, PlanKind::single, s), BadSize);
}

TEST_CASE("n=2 pair plans contain only the two ordered pairs") {
    const auto plan = draw_plan(2, 1000, PlanKind::pair, stream_for(9, 0, Purpose::permutation));
    REQUIRE(plan.size() == 1000);
    int forward = 0;
    for (std::size_t r = 0; r < plan.size(); ++r) {
        const bool ok = (plan.first[r] == 0 && plan.second[r] == 1) ||
                        (plan.first[r] == 1 && plan.second[r] == 0);
        REQUIRE(ok);
        forward += plan.first[r] == 0;
    }
    CHECK(forward > 400);
    CHECK(forward < 600);
}

TEST_CASE("single draws are uniform") {
    const auto plan = draw_plan(5, 100000, PlanKind::single, stream_for(2, 0, Purpose::permutation));
    CHECK(plan.second.empty());
    std::vector<int> counts(5, 0);
    for (auto i : plan.first) ++counts.at(i);
    const double sd = std::sqrt(1e5 * 0.2 * 0.8);
    for (int c : counts) CHECK(std::abs(c - 0.2e5) < 5 * sd);
}

TEST_CASE("pair draws are uniform over ordered distinct pairs") {
    const std::size_t rn = 1000000;
    const auto plan = draw_plan(4, rn, PlanKind::pair, stream_for(3, 0, Purpose::permutation));
    std::map<std::pair<int, int>, int> counts;
    for (std::size_t r = 0; r < rn; ++r) {
        REQUIRE(plan.first[r] != plan.second[r]);
        ++counts[{static_cast<int>(plan.first[r]), static_cast<int>(plan.second[r])}];
    }
    CHECK(counts.size() == 12);
    const double p = 1.0 / 12.0;
    const double sd = std::sqrt(rn * p * (1 - p));
    for (const auto& [pair, c] : counts) CHECK(std::abs(c - rn * p) < 5 * sd);
}

TEST_CASE("plans are deterministic") {
    const auto s = stream_for(77, 3, Purpose::permutation);
    const auto a = draw_plan(100, 500, PlanKind::pair, s);
    const auto b = draw_plan(100, 500, PlanKind::pair, s);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    const auto c = draw_plan(100, 500, PlanKind::pair, stream_for(77, 4, Purpose::permutation));
    CHECK(a.first != c.first);

    // fill_plan at a sub-plan offset is independent of what ran before.
    Philox e1(s, subplan_offset(5));
    ResamplePlan p1;
    fill_plan(e1, 100, 50, PlanKind::single, p1);
    Philox e2(s, subplan_offset(5));
    ResamplePlan p2;
    fill_plan(e2, 100, 50, PlanKind::single, p2);
    CHECK(p1.first == p2.first);
}

TEST_CASE("enumeration") {
    const auto single = enumerate_uniform(4, PlanKind::single);
    CHECK(single.size() == 4);
    const auto pairs = enumerate_uniform(4, PlanKind::pair);
    CHECK(pairs.size() == 12);
    CHECK(pairs.weight() == doctest::Approx(1.0 / 12));
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        CHECK(pairs.first[r] != pairs.second[r]);
        seen.insert({pairs.first[r], pairs.second[r]});
    }
    CHECK(seen.size() == 12);
}
