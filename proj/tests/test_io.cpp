#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "drinf/io.hpp"
#include "drinf/parallel.hpp"
#include "support.hpp"

using namespace drinf;

TEST_CASE("csv with and without header") {
    std::istringstream plain("1,2\n3,4\n");
    const auto a = io::read_csv(plain);
    CHECK(a.header.empty());
    CHECK(a.values.rows() == 2);
    CHECK(a.values(1, 0) == 3.0);

    std::istringstream named("x,y\n1.5,-2e-3\r\n+3,4\n\n");
    const auto b = io::read_csv(named);
    CHECK(b.header == std::vector<std::string>{"x", "y"});
    CHECK(b.values.rows() == 2);
    CHECK(b.values(0, 1) == -2e-3);
    CHECK(b.values(1, 0) == 3.0);
}

TEST_CASE("csv errors") {
    for (const char* text : {"1,2\n3,\n", "1,2\n3\n", "1,2\n3,abc\n", "x,y\n", "", "1,nan\n", "1,2\n3,4x\n"}) {
        std::istringstream in(text);
        CHECK_THROWS_AS(io::read_csv(in), ParseError);
    }
    CHECK_THROWS_AS(io::read_csv_file("/nonexistent/path.csv"), ParseError);
}

TEST_CASE("csv round trip is exact") {
    const auto x = testing_support::gaussian_data(50, 3, 12);
    Matrix v = x.values();
    v(0, 0) = 1e-300;
    v(1, 1) = -123456789.123456789;
    v(2, 2) = 0.1;
    std::ostringstream out;
    io::write_csv(out, v, {"a", "b", "c"});
    std::istringstream in(out.str());
    const auto t = io::read_csv(in);
    CHECK(t.header.size() == 3);
    CHECK(DataMatrix(t.values) == DataMatrix(v));
}

TEST_CASE("edge list id base") {
    std::istringstream zero("# comment\n0 1\n1 2\n\n2 0 # trailing\n");
    const auto g = io::read_edge_list(zero);
    CHECK(g.size() == 3);
    CHECK(g.edge_count() == 3);

    std::istringstream one("1 2\n2 3\n");
    const auto h = io::read_edge_list(one, 5);
    CHECK(h.size() == 5);
    CHECK(h.linked(0, 1));
    CHECK(h.linked(1, 2));
    CHECK_FALSE(h.linked(2, 3));

    std::istringstream bad("1 2 3\n");
    CHECK_THROWS_AS(io::read_edge_list(bad), ParseError);
    std::istringstream neg("1 -2\n");
    CHECK_THROWS_AS(io::read_edge_list(neg), ParseError);
}

TEST_CASE("parallel_for covers every index and rethrows the lowest failure") {
    setenv("DRINF_THREADS", "4", 1);
    CHECK(worker_count() == 4);
    std::vector<int> seen(1000, 0);
    parallel_for(seen.size(), [&](std::size_t i) { seen[i] += 1; });
    for (int s : seen) CHECK(s == 1);
    try {
        parallel_for(100, [](std::size_t i) {
            if (i == 17 || i == 60) throw BadSize(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const BadSize& e) {
        CHECK(std::string(e.what()) == "17");
    }
    setenv("DRINF_THREADS", "0", 1);
    CHECK(worker_count() >= 1);
    unsetenv("DRINF_THREADS");
}
