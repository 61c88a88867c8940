#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "drinf/applications.hpp"
#include "drinf/equality.hpp"
#include "drinf/io.hpp"
#include "drinf/simharness.hpp"
#include "support.hpp"

using namespace drinf;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "drinf_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_data(const std::string& name, const Matrix& values) {
    const auto path = (scratch_dir() / name).string();
    std::ofstream f(path);
    io::write_csv(f, values, {});
    return path;
}

}  // namespace

TEST_CASE("test subcommand matches the library") {
    const auto x = testing_support::gaussian_data(300, 2, 21);
    const auto path = write_data("x.csv", x.values());
    const auto r = run({"test", "--input", path, "--mu", "0,0.3", "--stat", "u", "--alpha", "0.05", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"statistic", "critical_value", "p_value", "reject", "rn"}) CHECK(j.contains(key));

    // The file re-ingests bit-identically, so the result equals a direct call.
    Vector mu(2);
    mu << 0, 0.3;
    TestConfig cfg;
    cfg.rn = rn_default(300, StatisticKind::u_type);
    const auto direct = test_equality(x, mu, cfg, 7);
    CHECK(j["statistic"].get<double>() == direct.statistic_value);
    CHECK(j["rn"].get<std::size_t>() == direct.rn_used);
    CHECK(j["reject"].get<bool>() == direct.reject);

    // Same argv, same bytes.
    CHECK(run({"test", "--input", path, "--mu", "0,0.3", "--stat", "u", "--alpha", "0.05", "--seed", "7"}).out ==
          r.out);

    const auto rn = run({"test", "--input", path, "--stat", "m", "--rn", "50", "--eps", "3", "--format", "tsv"});
    CHECK(rn.code == 0);
    CHECK(rn.out.find("rn\t50\n") != std::string::npos);
    const auto rule = run({"test", "--input", path, "--stat", "u", "--rn-rule", "mean", "--eps", "2"});
    CHECK(nlohmann::json::parse(rule.out)["rn"].get<std::size_t>() == rn_default(300, StatisticKind::mean_type, 2.0));
}

TEST_CASE("usage and data errors") {
    const auto path = write_data("y.csv", testing_support::gaussian_data(50, 1, 3).values());
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"test", "--input", path, "--bogus"}).code == 2);
    CHECK(run({"test"}).code == 2);
    CHECK(run({"test", "--input", path, "--alpha", "1.5"}).code == 2);
    CHECK(run({"test", "--input", path, "--stat", "x"}).code == 2);
    CHECK(run({"test", "--input", path, "--mu", "abc"}).code == 2);
    CHECK(run({"mc", "--reps", "0"}).code == 2);
    CHECK(run({"mc", "--nc", "7"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto missing = run({"test", "--input", (scratch_dir() / "none.csv").string()});
    CHECK(missing.code == 1);
    CHECK_FALSE(missing.err.empty());
    CHECK(missing.out.empty());
    CHECK(run({"test", "--input", path, "--mu", "0,0"}).code == 1);

    std::ofstream(scratch_dir() / "gap.csv") << "1\n\n2\n3,4\n";
    CHECK(run({"test", "--input", (scratch_dir() / "gap.csv").string()}).code == 1);
    std::ofstream(scratch_dir() / "const.csv") << "1\n1\n1\n1\n";
    CHECK(run({"test", "--input", (scratch_dir() / "const.csv").string()}).code == 1);
}

TEST_CASE("ci, ineq and powerlaw payloads") {
    const auto path = write_data("c.csv", testing_support::gaussian_data(400, 1, 5).values());
    const auto c = run({"ci", "--input", path, "--rn", "31", "--seed", "2"});
    REQUIRE(c.code == 0);
    const auto cj = nlohmann::json::parse(c.out);
    const auto iv = ci_mean(testing_support::gaussian_data(400, 1, 5), 0.05, 31, 2);
    CHECK(cj["lower"].get<double>() == iv.lower());
    CHECK(cj["upper"].get<double>() == iv.upper());

    const auto two = write_data("i.csv", testing_support::gaussian_data(300, 2, 6, -1.0).values());
    const auto q = run({"ineq", "--input", two, "--alpha", "0.05", "--L", "200", "--seed", "7"});
    REQUIRE(q.code == 0);
    const auto qj = nlohmann::json::parse(q.out);
    for (const char* key : {"q_stat", "c", "reject"}) CHECK(qj.contains(key));
    CHECK(run({"ineq", "--input", two, "--L", "50"}).code == 2);

    Matrix z(300, 1);
    Philox rng(stream_for(8, 0, Purpose::data));
    for (Eigen::Index i = 0; i < 300; ++i) z(i, 0) = 1.0 - 2.0 * std::log(rng.uniform());
    const auto zp = write_data("z.csv", z);
    const auto p = run({"powerlaw", "--input", zp, "--seed", "1"});
    REQUIRE(p.code == 0);
    CHECK(nlohmann::json::parse(p.out)["decision"] == "favor_null");
    CHECK(run({"powerlaw", "--input", zp, "--xmin", "2"}).code == 1);
    CHECK(run({"powerlaw", "--input", zp, "--xmin", "2", "--drop-below"}).code == 0);
}

TEST_CASE("netstat on an edge list") {
    std::ofstream(scratch_dir() / "e.txt") << "# triangle plus a tail\n1 2\n2 3\n3 1\n3 4\n";
    const auto r = run({"netstat", "--edges", (scratch_dir() / "e.txt").string(), "--quantity", "clustering",
                        "--nodes", "6"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["nodes"] == 6);
    CHECK(j["edges"] == 4);
    CHECK(j["avg_clustering"].get<double>() == doctest::Approx((1.0 + 1.0 + 1.0 / 3.0) / 6.0));
    CHECK(run({"netstat", "--edges", (scratch_dir() / "missing.txt").string()}).code == 1);
}

TEST_CASE("mc reproduces run_experiment") {
    const auto r = run({"mc", "--design", "cluster", "--nc", "20", "--nf", "100", "--ni", "200", "--reps", "200",
                        "--stat", "u", "--seed", "1"});
    REQUIRE(r.code == 0);
    sim::ExperimentConfig cfg;
    cfg.reps = 200;
    cfg.seed = 1;
    cfg.statistics = {StatisticKind::u_type};
    CHECK(r.out == sim::run_experiment(cfg).to_tsv());
    CHECK(r.out.find("Size\t") != std::string::npos);
    CHECK(r.out.find("Power\t") != std::string::npos);

    const auto j = run({"mc", "--design", "tail", "--n", "100", "--reps", "100", "--eps", "1", "--format", "json"});
    REQUIRE(j.code == 0);
    CHECK(nlohmann::json::parse(j.out)["cells"].size() == 2);
    CHECK(run({"mc", "--design", "spillover", "--n", "200", "--reps", "100", "--eps", "1", "--beta", "1,2"}).code == 2);
}
