#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "drinf/applications.hpp"
#include "drinf/equality.hpp"
#include "drinf/inequality.hpp"
#include "drinf/io.hpp"
#include "drinf/simharness.hpp"

namespace drinf::cli {

namespace {

using Json = nlohmann::ordered_json;

// Flag values that parse but do not make sense; reported as usage errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const char* first = item.data();
        const char* last = item.data() + item.size();
        while (first < last && *first == ' ') ++first;
        if (first < last && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            throw UsageError(std::string(flag) + ": not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw UsageError(std::string(flag) + ": empty list");
    }
    return out;
}

const CLI::Validator open_unit = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(s);
        } catch (...) {
            return "not a number";
        }
        return (v > 0.0 && v < 1.0) ? "" : "must lie strictly between 0 and 1";
    },
    "in (0,1)");

const CLI::Validator positive = CLI::Validator(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            v = std::stod(s);
        } catch (...) {
            return "not a number";
        }
        return (std::isfinite(v) && v > 0.0) ? "" : "must be positive";
    },
    "> 0");

StatisticKind kind_of(const std::string& s) {
    return s == "m" ? StatisticKind::mean_type : StatisticKind::u_type;
}

// Options shared by the single-dataset subcommands.
struct Common {
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<std::size_t> rn;
    std::string rn_rule = "stat";
    double eps = 1.0;
    double delta = 1.0;
    std::string format = "json";

    void attach(CLI::App* sub) {
        sub->add_option("--alpha", alpha, "Significance level")->check(open_unit);
        sub->add_option("--seed", seed, "Master seed");
        sub->add_option("--rn", rn, "Explicit number of resampling draws")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
        sub->add_option("--rn-rule", rn_rule, "Which default rule sets R_n")
            ->check(CLI::IsMember({"stat", "mean", "u"}));
        sub->add_option("--eps", eps, "Multiplier on the default rule")->check(positive);
        sub->add_option("--delta", delta, "Rate exponent of the default rule")->check(CLI::Range(0.0, 1.0))->check(positive);
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
    }

    std::size_t resolve(std::size_t n, StatisticKind stat) const {
        if (rn) {
            return *rn;
        }
        StatisticKind rule = stat;
        if (rn_rule == "mean") {
            rule = StatisticKind::mean_type;
        } else if (rn_rule == "u") {
            rule = StatisticKind::u_type;
        }
        return rn_default(n, rule, eps, delta);
    }
};

std::string scalar_text(const Json& v) {
    if (v.is_null()) {
        return "NA";
    }
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void emit(const Json& j, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << j.dump(2) << '\n';
        return;
    }
    for (const auto& [key, value] : j.items()) {
        out << key << '\t';
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                out << (i ? "," : "") << scalar_text(value[i]);
            }
        } else if (value.is_object()) {
            bool first = true;
            for (const auto& [k, v] : value.items()) {
                out << (first ? "" : ",") << k << '=' << scalar_text(v);
                first = false;
            }
        } else {
            out << scalar_text(value);
        }
        out << '\n';
    }
}

Json to_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

Vector mu_vector(const std::optional<std::string>& text, Eigen::Index m) {
    if (!text) {
        return Vector::Zero(m);
    }
    const auto values = parse_list(*text, "--mu");
    if (static_cast<Eigen::Index>(values.size()) != m) {
        throw BadSize("--mu has " + std::to_string(values.size()) + " entries but the data has " +
                      std::to_string(m) + " columns");
    }
    return Eigen::Map<const Vector>(values.data(), m);
}

DataMatrix load(const std::string& path) { return DataMatrix(io::read_csv_file(path).values); }

Json result_json(const TestResult& r, const std::string& stat, std::size_t n, Eigen::Index m) {
    Json j;
    j["kind"] = stat;
    j["statistic"] = r.statistic_value;
    j["critical_value"] = r.critical_value;
    j["p_value"] = r.p_value ? Json(*r.p_value) : Json(nullptr);
    j["reject"] = r.reject;
    j["rn"] = r.rn_used;
    j["n"] = n;
    j["m"] = m;
    return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dependence-robust inference with resampled statistics", "drinf"};
    app.require_subcommand(1);
    app.fallthrough(false);

    // test
    Common test_common;
    std::string test_input, test_stat = "u", test_cv = "asymptotic";
    std::optional<std::string> test_mu;
    std::size_t test_L = 1000;
    auto* test = app.add_subcommand("test", "Test H0: E[X] = mu");
    test->add_option("--input", test_input, "CSV data file")->required();
    test->add_option("--mu", test_mu, "Hypothesized mean, comma-separated");
    test->add_option("--stat", test_stat, "Statistic: m (mean-type) or u (U-type)")->check(CLI::IsMember({"m", "u"}));
    test->add_option("--cv", test_cv, "Critical value")->check(CLI::IsMember({"asymptotic", "permutation"}));
    test->add_option("--L", test_L, "Permutation draw sets")->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
    test_common.attach(test);

    // ci
    Common ci_common;
    std::string ci_input;
    auto* ci = app.add_subcommand("ci", "Mean-type confidence interval for a scalar mean");
    ci->add_option("--input", ci_input, "CSV data file, one column")->required();
    ci_common.attach(ci);

    // ineq
    Common ineq_common;
    std::string ineq_input, ineq_cv = "permutation";
    std::optional<std::string> ineq_mu;
    std::size_t ineq_L = 1000;
    auto* ineq = app.add_subcommand("ineq", "Test H0: E[X] <= mu componentwise");
    ineq->add_option("--input", ineq_input, "CSV data file")->required();
    ineq->add_option("--mu", ineq_mu, "Boundary, comma-separated (default 0)");
    ineq->add_option("--L", ineq_L, "Permutation draw sets")->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
    ineq->add_option("--cv", ineq_cv, "permutation, or asymptotic (scalar data only)")
        ->check(CLI::IsMember({"asymptotic", "permutation"}));
    ineq_common.attach(ineq);

    // powerlaw
    Common pl_common;
    std::string pl_input;
    double pl_xmin = 1.0;
    bool pl_drop = false;
    auto* pl = app.add_subcommand("powerlaw", "Power law against exponential, robust to dependence");
    pl->add_option("--input", pl_input, "CSV data file, one column")->required();
    pl->add_option("--xmin", pl_xmin, "Lower support point")->check(positive);
    pl->add_flag("--drop-below", pl_drop, "Discard values below --xmin instead of failing");
    pl_common.attach(pl);

    // netstat
    Common net_common;
    std::string net_edges, net_quantity = "clustering-contrast", net_stat = "u", net_cv = "asymptotic";
    std::optional<std::string> net_mu;
    std::size_t net_nodes = 0, net_L = 1000;
    auto* net = app.add_subcommand("netstat", "Inference on network averages from an edge list");
    net->add_option("--edges", net_edges, "Edge list file")->required();
    net->add_option("--nodes", net_nodes, "Minimum node count (isolated nodes)");
    net->add_option("--quantity", net_quantity, "What to average")
        ->check(CLI::IsMember({"clustering-contrast", "clustering", "degree"}));
    net->add_option("--mu", net_mu, "Hypothesized average (default 0)");
    net->add_option("--stat", net_stat, "Statistic: m or u")->check(CLI::IsMember({"m", "u"}));
    net->add_option("--cv", net_cv, "Critical value")->check(CLI::IsMember({"asymptotic", "permutation"}));
    net->add_option("--L", net_L, "Permutation draw sets")->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));
    net_common.attach(net);

    // mc
    std::string mc_design = "cluster", mc_stat = "both", mc_format = "tsv", mc_effect = "family";
    std::string mc_tail = "exponential", mc_netstat = "clustering";
    std::optional<std::string> mc_eps, mc_theta, mc_beta;
    std::optional<double> mc_param;
    std::size_t mc_nc = 20, mc_nf = 100, mc_ni = 200, mc_n = 500, mc_reps = 2000, mc_calib = 0;
    double mc_theta0 = 1.0, mc_radius = 0.0, mc_ptreat = 0.3, mc_xmin = 1.0, mc_alpha = 0.05;
    std::uint64_t mc_seed = 0;
    bool mc_ttests = false, mc_timing = false;
    auto* mc = app.add_subcommand("mc", "Monte Carlo size and power table");
    mc->add_option("--design", mc_design, "Data-generating process")
        ->check(CLI::IsMember({"cluster", "network", "spillover", "tail"}));
    mc->add_option("--nc", mc_nc, "Cities");
    mc->add_option("--nf", mc_nf, "Families");
    mc->add_option("--ni", mc_ni, "Individuals (sample size)");
    mc->add_option("--theta0", mc_theta0, "True mean of the cluster design");
    mc->add_option("--effect", mc_effect, "Level of the random effect")->check(CLI::IsMember({"family", "city", "none"}));
    mc->add_option("--n", mc_n, "Sample size for network, spillover and tail designs");
    mc->add_option("--theta", mc_theta, "Network parameters theta1..theta4");
    mc->add_option("--radius", mc_radius, "Linking radius (default sqrt(3.6/n))")->check(CLI::NonNegativeNumber);
    mc->add_option("--network-stat", mc_netstat, "Network average under test")
        ->check(CLI::IsMember({"clustering", "degree"}));
    mc->add_option("--calibration-reps", mc_calib, "Draws for the true network mean (default --reps)");
    mc->add_option("--beta", mc_beta, "Spillover coefficients beta1..beta4");
    mc->add_option("--p-treat", mc_ptreat, "Treatment probability")->check(open_unit);
    mc->add_option("--tail", mc_tail, "Tail family")->check(CLI::IsMember({"exponential", "powerlaw"}));
    mc->add_option("--param", mc_param, "Exponential rate or power-law exponent (default 0.5 or 2)");
    mc->add_option("--xmin", mc_xmin, "Lower support point")->check(positive);
    mc->add_option("--stat", mc_stat, "Statistics to run")->check(CLI::IsMember({"m", "u", "both"}));
    mc->add_option("--eps", mc_eps, "Comma-separated multipliers on the default R_n");
    mc->add_option("--alpha", mc_alpha, "Significance level")->check(open_unit);
    mc->add_option("--reps", mc_reps, "Replications")->check(CLI::Range(std::size_t{100}, std::size_t{1} << 32));
    mc->add_option("--seed", mc_seed, "Master seed");
    mc->add_flag("--t-tests", mc_ttests, "Add cluster-robust t-tests (cluster design)");
    mc->add_flag("--timing", mc_timing, "Include wall-clock time in the output");
    mc->add_option("--format", mc_format, "Output format")->check(CLI::IsMember({"json", "tsv"}));

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("drinf");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (test->parsed()) {
            const auto x = load(test_input);
            const auto stat = kind_of(test_stat);
            const Vector mu = mu_vector(test_mu, x.m());
            TestConfig cfg;
            cfg.statistic = stat;
            cfg.alpha = test_common.alpha;
            cfg.rn = test_common.resolve(static_cast<std::size_t>(x.n()), stat);
            cfg.cv = test_cv == "permutation" ? CvMode::permutation : CvMode::asymptotic;
            cfg.L = test_L;
            const auto r = test_equality(x, mu, cfg, test_common.seed);
            Json j = result_json(r, test_stat, static_cast<std::size_t>(x.n()), x.m());
            j["cv"] = test_cv;
            if (stat == StatisticKind::mean_type) {
                j["tilde"] = to_json(r.tilde_vector);
            }
            emit(j, test_common.format, out);
        } else if (ci->parsed()) {
            const auto x = load(ci_input);
            const std::size_t rn = ci_common.resolve(static_cast<std::size_t>(x.n()), StatisticKind::mean_type);
            const auto iv = ci_mean(x, ci_common.alpha, rn, ci_common.seed);
            Json j;
            j["center"] = iv.center;
            j["half_width"] = iv.half_width;
            j["lower"] = iv.lower();
            j["upper"] = iv.upper();
            j["rn"] = rn;
            j["n"] = x.n();
            emit(j, ci_common.format, out);
        } else if (ineq->parsed()) {
            auto x = load(ineq_input);
            const Vector mu = mu_vector(ineq_mu, x.m());
            if (ineq_mu) {
                x = DataMatrix(x.values().rowwise() - mu.transpose());
            }
            TestConfig cfg;
            cfg.statistic = StatisticKind::u_type;
            cfg.alpha = ineq_common.alpha;
            cfg.rn = ineq_common.resolve(static_cast<std::size_t>(x.n()), StatisticKind::u_type);
            cfg.L = ineq_L;
            const auto r = ineq_cv == "asymptotic"
                               ? ineq::test_inequality_scalar_asymptotic(x, cfg, ineq_common.seed)
                               : ineq::test_inequality(x, cfg, ineq_common.seed);
            Json j;
            j["q_stat"] = r.q_stat;
            j["decision_statistic"] = r.decision_statistic;
            j["c"] = r.critical_value;
            j["reject"] = r.reject;
            j["rn"] = r.rn_used;
            j["L"] = r.L_used;
            j["q_components"] = to_json(r.q_components);
            j["lambda_hat"] = to_json(r.lambda_hat);
            emit(j, ineq_common.format, out);
        } else if (pl->parsed()) {
            const auto table = io::read_csv_file(pl_input);
            if (table.values.cols() != 1) {
                throw BadSize("powerlaw expects one column");
            }
            app::TailSample s{{}, pl_xmin};
            for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
                const double z = table.values(i, 0);
                if (pl_drop && z < pl_xmin) {
                    continue;
                }
                s.z.push_back(z);
            }
            const std::size_t rn = pl_common.resolve(s.z.size(), StatisticKind::u_type);
            const auto r = app::powerlaw_test(s, pl_common.alpha, rn, pl_common.seed);
            Json j;
            j["decision"] = app::to_string(r.decision);
            j["statistic"] = r.statistic;
            j["critical_value"] = r.critical_value;
            j["mean_contrast"] = r.mean_contrast;
            j["normalized_llr"] = r.normalized_llr;
            j["alpha_hat"] = r.alpha_hat;
            j["gamma_hat"] = r.gamma_hat;
            j["rn"] = r.rn_used;
            j["n"] = s.z.size();
            emit(j, pl_common.format, out);
        } else if (net->parsed()) {
            const auto g = io::read_edge_list_file(net_edges, net_nodes);
            DataMatrix x = net_quantity == "degree"   ? DataMatrix::column(app::degree_vector(g))
                           : net_quantity == "clustering"
                               ? DataMatrix::column([&] {
                                     const auto c = app::clustering_coefficients(g);
                                     return Vector(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
                                 }())
                               : app::clustering_contrast(g);
            const auto stat = kind_of(net_stat);
            TestConfig cfg;
            cfg.statistic = stat;
            cfg.alpha = net_common.alpha;
            cfg.rn = net_common.resolve(g.size(), stat);
            cfg.cv = net_cv == "permutation" ? CvMode::permutation : CvMode::asymptotic;
            cfg.L = net_L;
            const auto r = test_equality(x, mu_vector(net_mu, 1), cfg, net_common.seed);
            const double n = static_cast<double>(g.size());
            Json j;
            j["nodes"] = g.size();
            j["edges"] = g.edge_count();
            j["avg_clustering"] = app::avg_clustering(g);
            j["avg_degree"] = 2.0 * static_cast<double>(g.edge_count()) / n;
            j["density"] = 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
            j["quantity"] = net_quantity;
            j["mean"] = num::sample_mean(x)[0];
            const Json test_part = result_json(r, net_stat, g.size(), 1);
            for (const auto& [k, v] : test_part.items()) {
                j[k] = v;
            }
            emit(j, net_common.format, out);
        } else if (mc->parsed()) {
            sim::ExperimentConfig cfg;
            if (mc_design == "cluster") {
                sim::ClusterDesign d{mc_nc, mc_nf, mc_ni, mc_theta0, sim::EffectLevel::family};
                d.effect = mc_effect == "city" ? sim::EffectLevel::city
                           : mc_effect == "none" ? sim::EffectLevel::none
                                                 : sim::EffectLevel::family;
                cfg.dgp = d;
            } else if (mc_design == "tail") {
                const bool exp = mc_tail == "exponential";
                cfg.dgp = sim::TailDesign{mc_n, exp ? sim::TailFamily::exponential : sim::TailFamily::powerlaw,
                                          mc_param.value_or(exp ? 0.5 : 2.0), mc_xmin};
            } else {
                sim::NetworkDesign nd{mc_n};
                nd.radius = mc_radius;
                if (mc_theta) {
                    const auto t = parse_list(*mc_theta, "--theta");
                    if (t.size() != 4) throw UsageError("--theta needs 4 values");
                    std::copy(t.begin(), t.end(), nd.theta.begin());
                }
                if (mc_design == "network") {
                    cfg.dgp = nd;
                } else {
                    sim::SpilloverDesign sd{nd};
                    sd.p_treat = mc_ptreat;
                    if (mc_beta) {
                        const auto b = parse_list(*mc_beta, "--beta");
                        if (b.size() != 4) throw UsageError("--beta needs 4 values");
                        std::copy(b.begin(), b.end(), sd.beta.begin());
                    }
                    cfg.dgp = sd;
                }
            }
            if (mc_stat == "m") {
                cfg.statistics = {StatisticKind::mean_type};
            } else if (mc_stat == "u") {
                cfg.statistics = {StatisticKind::u_type};
            }
            if (mc_eps) {
                cfg.eps_grid = parse_list(*mc_eps, "--eps");
            }
            cfg.alpha = mc_alpha;
            cfg.reps = mc_reps;
            cfg.seed = mc_seed;
            cfg.t_tests = mc_ttests;
            cfg.calibration_reps = mc_calib;
            cfg.network_statistic =
                mc_netstat == "degree" ? sim::NetworkStatistic::degree : sim::NetworkStatistic::clustering;
            for (double e : cfg.eps_grid) {
                if (!(e > 0.0)) throw UsageError("--eps values must be positive");
            }
            try {
                sim::validate(cfg.dgp);
            } catch (const BadSpec& e) {
                throw UsageError(e.what());
            }
            const auto report = sim::run_experiment(cfg);
            out << (mc_format == "json" ? report.to_json(mc_timing) : report.to_tsv(mc_timing));
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace drinf::cli
