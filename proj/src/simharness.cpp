#include "drinf/simharness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "drinf/numkernel.hpp"
#include "drinf/parallel.hpp"
#include "drinf/resample.hpp"

namespace drinf::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) {
        throw BadSpec(what);
    }
}

void validate_network(const NetworkDesign& d) {
    require(d.n >= 2, "network design needs n >= 2");
    require(d.n < (std::size_t{1} << 31), "network design too large");
    require(std::isfinite(d.radius) && d.radius >= 0.0, "radius must be finite and >= 0");
    require(!std::isnan(d.theta[0]) && std::isfinite(d.theta[1]) && std::isfinite(d.theta[2]),
            "theta1..theta3 must be numbers");
    require(std::isfinite(d.theta[3]) && d.theta[3] >= 0.0, "theta4 is a scale and must be >= 0");
}

// Round-one linking index without the common-neighbour term.
double base_index(const NetworkDesign& d, int zi, int zj) {
    return d.theta[0] + static_cast<double>(zi + zj) * d.theta[1];
}

bool share_neighbor(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) {
            return true;
        }
        if (*i < *j) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

NetworkSample network_from(const NetworkDesign& d, Philox& rng) {
    const std::size_t n = d.n;
    const double r = d.effective_radius();
    NetworkSample s{app::Graph(n), std::vector<int>(n), Matrix(static_cast<Eigen::Index>(n), 2)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        s.position(ii, 0) = rng.uniform();
        s.position(ii, 1) = rng.uniform();
        s.z[i] = rng.bernoulli(0.5) ? 1 : 0;
    }

    // Candidate pairs within the radius, via a grid of cells of side >= r.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (r > 0.0) {
        const auto side = static_cast<std::size_t>(std::clamp(std::floor(1.0 / r), 1.0, 4096.0));
        std::vector<std::vector<std::uint32_t>> bins(side * side);
        auto bin_of = [&](double v) {
            return std::min(side - 1, static_cast<std::size_t>(v * static_cast<double>(side)));
        };
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            bins[bin_of(s.position(ii, 0)) * side + bin_of(s.position(ii, 1))].push_back(
                static_cast<std::uint32_t>(i));
        }
        const double r2 = r * r;
        for (std::size_t i = 0; i < n; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const std::size_t bx = bin_of(s.position(ii, 0));
            const std::size_t by = bin_of(s.position(ii, 1));
            for (std::size_t cx = bx == 0 ? 0 : bx - 1; cx <= std::min(side - 1, bx + 1); ++cx) {
                for (std::size_t cy = by == 0 ? 0 : by - 1; cy <= std::min(side - 1, by + 1); ++cy) {
                    for (std::uint32_t j : bins[cx * side + cy]) {
                        if (j <= i) {
                            continue;
                        }
                        const double dx = s.position(ii, 0) - s.position(j, 0);
                        const double dy = s.position(ii, 1) - s.position(j, 1);
                        if (dx * dx + dy * dy <= r2) {
                            pairs.emplace_back(static_cast<std::uint32_t>(i), j);
                        }
                    }
                }
            }
        }
        std::sort(pairs.begin(), pairs.end());
    }

    std::vector<double> zeta(pairs.size());
    for (auto& v : zeta) {
        v = d.theta[3] * rng.normal();
    }

    app::Graph first(n);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        if (base_index(d, s.z[i], s.z[j]) + zeta[k] > 0.0) {
            first.add_edge_unchecked(i, j);
        }
    }
    first.finalize();

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        const double common = share_neighbor(first.neighbors(i), first.neighbors(j)) ? d.theta[2] : 0.0;
        if (base_index(d, s.z[i], s.z[j]) + common + zeta[k] > 0.0) {
            s.graph.add_edge_unchecked(i, j);
        }
    }
    s.graph.finalize();
    return s;
}

double network_statistic(const app::Graph& g, NetworkStatistic stat) {
    return stat == NetworkStatistic::clustering ? app::avg_clustering(g) : degree_vector(g).mean();
}

DataMatrix network_column(const app::Graph& g, NetworkStatistic stat) {
    if (stat == NetworkStatistic::degree) {
        return DataMatrix::column(app::degree_vector(g));
    }
    const auto c = app::clustering_coefficients(g);
    return DataMatrix::column(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
}

const char* stat_label(StatisticKind s) { return s == StatisticKind::mean_type ? "M" : "U"; }

std::string fixed2(double v) {
    if (std::isnan(v)) {
        return "NA";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

enum Outcome : std::int8_t { miss = 0, hit = 1, failed = 2 };

}  // namespace

// ---------------------------------------------------------------------------
// Designs

double NetworkDesign::effective_radius() const {
    return radius > 0.0 ? radius : std::sqrt(3.6 / static_cast<double>(n));
}

void validate(const DgpSpec& spec) {
    std::visit(overloaded{
                   [](const ClusterDesign& d) {
                       require(d.n_c >= 1 && d.n_f >= 1 && d.n_i >= 2, "cluster sizes must be positive, n_i >= 2");
                       require(d.n_f % d.n_c == 0, "families must split evenly over cities");
                       require(d.n_i % d.n_f == 0, "individuals must split evenly over families");
                       require(std::isfinite(d.theta0), "theta0 must be finite");
                   },
                   [](const NetworkDesign& d) { validate_network(d); },
                   [](const SpilloverDesign& d) {
                       validate_network(d.network);
                       require(d.p_treat > 0.0 && d.p_treat < 1.0, "p_treat must lie in (0,1)");
                       for (double b : d.beta) {
                           require(std::isfinite(b), "beta must be finite");
                       }
                   },
                   [](const TailDesign& d) {
                       require(d.n >= 1, "tail design needs n >= 1");
                       require(std::isfinite(d.x_min) && d.x_min > 0.0, "x_min must be positive");
                       if (d.family == TailFamily::exponential) {
                           require(std::isfinite(d.parameter) && d.parameter > 0.0, "rate must be positive");
                       } else {
                           require(std::isfinite(d.parameter) && d.parameter > 1.0, "exponent must exceed 1");
                       }
                   },
               },
               spec);
}

std::string design_name(const DgpSpec& spec) {
    static const char* names[] = {"cluster", "network", "spillover", "tail"};
    return names[spec.index()];
}

std::size_t sample_size(const DgpSpec& spec) {
    return std::visit(overloaded{
                          [](const ClusterDesign& d) { return d.n_i; },
                          [](const NetworkDesign& d) { return d.n; },
                          [](const SpilloverDesign& d) { return d.network.n; },
                          [](const TailDesign& d) { return d.n; },
                      },
                      spec);
}

// ---------------------------------------------------------------------------
// Generators

ClusterSample gen_cluster(const ClusterDesign& d, const StreamId& stream) {
    validate(d);
    Philox rng(stream);
    const std::size_t per_family = d.n_i / d.n_f;
    const std::size_t per_city = d.n_f / d.n_c;

    std::vector<double> effect;
    if (d.effect == EffectLevel::family) {
        effect.resize(d.n_f);
    } else if (d.effect == EffectLevel::city) {
        effect.resize(d.n_c);
    }
    for (auto& a : effect) {
        a = rng.normal();
    }

    Vector y(static_cast<Eigen::Index>(d.n_i));
    std::vector<std::uint32_t> family(d.n_i), city(d.n_i);
    for (std::size_t i = 0; i < d.n_i; ++i) {
        family[i] = static_cast<std::uint32_t>(i / per_family);
        city[i] = static_cast<std::uint32_t>(family[i] / per_city);
        double a = 0.0;
        if (d.effect == EffectLevel::family) {
            a = effect[family[i]];
        } else if (d.effect == EffectLevel::city) {
            a = effect[city[i]];
        }
        y[static_cast<Eigen::Index>(i)] = d.theta0 + a + rng.normal();
    }
    return {DataMatrix::column(y), std::move(family), std::move(city)};
}

NetworkSample gen_network(const NetworkDesign& d, const StreamId& stream) {
    validate_network(d);
    Philox rng(stream);
    return network_from(d, rng);
}

SpilloverSample gen_spillover(const SpilloverDesign& d, const StreamId& stream) {
    validate(d);
    Philox rng(stream);
    auto net = network_from(d.network, rng);
    const std::size_t n = d.network.n;

    std::vector<int> treated(n);
    for (auto& t : treated) {
        t = rng.bernoulli(d.p_treat) ? 1 : 0;
    }
    std::vector<double> nu(n);
    for (auto& v : nu) {
        v = rng.normal();
    }

    SpilloverSample s{std::move(net.graph), {}, {Vector(static_cast<Eigen::Index>(n)),
                                                 Matrix(static_cast<Eigen::Index>(n), 4)}};
    s.units.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = s.graph.neighbors(i);
        std::size_t t = 0;
        double nu_sum = 0.0;
        for (std::uint32_t j : nb) {
            t += static_cast<std::size_t>(treated[j]);
            nu_sum += nu[j];
        }
        const std::size_t gamma = nb.size();
        const double eps = nu[i] + (gamma == 0 ? 0.0 : nu_sum / static_cast<double>(gamma));
        const double y = d.beta[0] + d.beta[1] * treated[i] + d.beta[2] * static_cast<double>(t) +
                         d.beta[3] * static_cast<double>(gamma) + eps;
        s.units[i] = {y, treated[i], t, gamma};
        const auto ii = static_cast<Eigen::Index>(i);
        s.regression.y[ii] = y;
        s.regression.design(ii, 0) = 1.0;
        s.regression.design(ii, 1) = treated[i];
        s.regression.design(ii, 2) = static_cast<double>(t);
        s.regression.design(ii, 3) = static_cast<double>(gamma);
    }
    return s;
}

app::TailSample gen_tail(const TailDesign& d, const StreamId& stream) {
    validate(d);
    Philox rng(stream);
    app::TailSample s{std::vector<double>(d.n), d.x_min};
    for (auto& z : s.z) {
        const double u = rng.uniform();
        z = d.family == TailFamily::exponential ? d.x_min - std::log(u) / d.parameter
                                                : d.x_min * std::pow(u, -1.0 / (d.parameter - 1.0));
    }
    return s;
}

double cluster_t_stat(const Vector& y, const std::vector<std::uint32_t>& cluster, double theta) {
    if (static_cast<std::size_t>(y.size()) != cluster.size() || y.size() < 2) {
        throw BadSize("cluster labels must match the sample, n >= 2");
    }
    const double n = static_cast<double>(y.size());
    const double ybar = y.mean();
    const std::uint32_t groups = *std::max_element(cluster.begin(), cluster.end()) + 1;
    std::vector<double> score(groups, 0.0);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        score[cluster[static_cast<std::size_t>(i)]] += y[i] - ybar;
    }
    double v = 0.0;
    for (double s : score) {
        v += s * s;
    }
    if (!(v > 0.0)) {
        throw SingularCovariance("clustered variance is zero");
    }
    return (ybar - theta) / (std::sqrt(v) / n);
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<Hypothesis> default_hypotheses(const ExperimentConfig& cfg) {
    return std::visit(
        overloaded{
            [](const ClusterDesign& d) {
                return std::vector<Hypothesis>{{"Size", d.theta0}, {"Power", d.theta0 + 0.5}};
            },
            [&](const NetworkDesign&) {
                const double shift = cfg.network_statistic == NetworkStatistic::clustering ? 0.08 : 0.8;
                return std::vector<Hypothesis>{{"Size", 0.0}, {"Power", shift}};
            },
            [](const SpilloverDesign& d) {
                return std::vector<Hypothesis>{{"Size", d.beta[2]}, {"Power", d.beta[2] - 0.8}};
            },
            [](const TailDesign&) { return std::vector<Hypothesis>{}; },
        },
        cfg.dgp);
}

double CellResult::percent() const {
    if (valid == 0) {
        return std::nan("");
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(valid);
}

const CellResult& ExperimentReport::cell(const std::string& statistic, const std::string& row,
                                         const std::string& column) const {
    for (const auto& c : cells) {
        if (c.statistic == statistic && c.row == row && c.column == column) {
            return c;
        }
    }
    throw BadSpec("no cell " + statistic + "/" + row + "/" + column);
}

std::string format_eps(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

std::string ExperimentReport::to_tsv(bool with_timing) const {
    std::ostringstream out;
    out << "# design=" << design << " n=" << n << " reps=" << reps << " seed=" << seed;
    if (with_timing) {
        out << " wall_seconds=" << fixed2(wall_seconds);
    }
    out << '\n';

    // Blocks in first-appearance order of the statistic label.
    std::vector<std::string> stats;
    for (const auto& c : cells) {
        if (std::find(stats.begin(), stats.end(), c.statistic) == stats.end()) {
            stats.push_back(c.statistic);
        }
    }
    for (const auto& s : stats) {
        std::vector<std::string> rows, cols;
        for (const auto& c : cells) {
            if (c.statistic != s) {
                continue;
            }
            if (std::find(rows.begin(), rows.end(), c.row) == rows.end()) {
                rows.push_back(c.row);
            }
            if (std::find(cols.begin(), cols.end(), c.column) == cols.end()) {
                cols.push_back(c.column);
            }
        }
        out << s;
        for (const auto& col : cols) {
            out << '\t' << col;
        }
        out << '\n';
        std::size_t failures = 0;
        for (const auto& r : rows) {
            out << r;
            for (const auto& col : cols) {
                const auto& c = cell(s, r, col);
                out << '\t' << fixed2(c.percent());
            }
            out << '\n';
        }
        if (cell(s, rows.front(), cols.front()).rn > 0) {
            out << "R_n";
            for (const auto& col : cols) {
                out << '\t' << cell(s, rows.front(), col).rn;
            }
            out << '\n';
        }
        for (const auto& c : cells) {
            if (c.statistic == s) {
                failures += c.failures;
            }
        }
        if (failures > 0) {
            out << "failures";
            for (const auto& col : cols) {
                std::size_t f = 0;
                for (const auto& r : rows) {
                    f += cell(s, r, col).failures;
                }
                out << '\t' << f;
            }
            out << '\n';
        }
    }
    for (const auto& [k, v] : summary) {
        out << "# " << k << '=' << full(v) << '\n';
    }
    return out.str();
}

std::string ExperimentReport::to_json(bool with_timing) const {
    nlohmann::ordered_json j;
    j["design"] = design;
    j["n"] = n;
    j["reps"] = reps;
    j["seed"] = seed;
    if (with_timing) {
        j["wall_seconds"] = wall_seconds;
    }
    auto& arr = j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json e;
        e["statistic"] = c.statistic;
        e["row"] = c.row;
        e["column"] = c.column;
        e["rn"] = c.rn;
        e["hits"] = c.hits;
        e["valid"] = c.valid;
        e["failures"] = c.failures;
        const double p = c.percent();
        e["percent"] = std::isnan(p) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(p);
        arr.push_back(std::move(e));
    }
    j["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : summary) {
        j["summary"][k] = v;
    }
    return j.dump(2) + "\n";
}

double calibrate_network_mean(const NetworkDesign& d, NetworkStatistic stat, std::size_t reps,
                              std::uint64_t seed) {
    validate_network(d);
    require(reps >= 1, "calibration needs at least one draw");
    std::vector<double> values(reps);
    parallel_for(reps, [&](std::size_t k) {
        values[k] = network_statistic(gen_network(d, stream_for(seed, k, Purpose::calibration)).graph, stat);
    });
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(reps);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg.dgp);
    require(cfg.reps >= 100, "reps must be at least 100");
    require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha must lie in (0,1)");
    require(!cfg.eps_grid.empty(), "eps grid is empty");
    for (double e : cfg.eps_grid) {
        require(std::isfinite(e) && e > 0.0, "eps must be positive");
    }

    const auto start = std::chrono::steady_clock::now();
    const bool tail = std::holds_alternative<TailDesign>(cfg.dgp);
    const bool cluster = std::holds_alternative<ClusterDesign>(cfg.dgp);
    const std::size_t n = sample_size(cfg.dgp);

    // The tail comparison is U-type only.
    std::vector<StatisticKind> stats = tail ? std::vector<StatisticKind>{StatisticKind::u_type} : cfg.statistics;
    require(!stats.empty(), "no statistic selected");
    std::vector<Hypothesis> hyps = cfg.hypotheses.empty() ? default_hypotheses(cfg) : cfg.hypotheses;
    if (tail) {
        hyps = {{"Favor Exp", 0.0}, {"Favor PL", 0.0}};
    }
    require(!hyps.empty(), "no hypotheses");

    ExperimentReport report;
    report.design = design_name(cfg.dgp);
    report.n = n;
    report.reps = cfg.reps;
    report.seed = cfg.seed;

    double theta_star = 0.0;
    if (const auto* net = std::get_if<NetworkDesign>(&cfg.dgp)) {
        const std::size_t creps = cfg.calibration_reps == 0 ? cfg.reps : cfg.calibration_reps;
        theta_star = calibrate_network_mean(*net, cfg.network_statistic, creps, cfg.seed);
        report.summary["theta_star"] = theta_star;
    }

    const std::size_t E = cfg.eps_grid.size();
    const std::size_t H = hyps.size();
    std::vector<std::size_t> rn(stats.size() * E);
    for (std::size_t s = 0; s < stats.size(); ++s) {
        for (std::size_t e = 0; e < E; ++e) {
            rn[s * E + e] = rn_default(n, stats[s], cfg.eps_grid[e]);
        }
    }
    for (std::size_t s = 0; s < stats.size(); ++s) {
        for (std::size_t h = 0; h < H; ++h) {
            for (std::size_t e = 0; e < E; ++e) {
                report.cells.push_back({stat_label(stats[s]), hyps[h].label, format_eps(cfg.eps_grid[e]),
                                        rn[s * E + e], 0, 0, 0});
            }
        }
    }
    const std::size_t resampled_cells = report.cells.size();
    static const char* levels[] = {"city", "family", "individual"};
    const bool t_tests = cluster && cfg.t_tests;
    if (t_tests) {
        for (const auto& h : hyps) {
            for (const char* level : levels) {
                report.cells.push_back({"t", h.label, level, 0, 0, 0, 0});
            }
        }
    }
    const std::size_t C = report.cells.size();
    std::vector<std::int8_t> outcome(cfg.reps * C, failed);
    std::vector<double> loglik(cfg.reps, std::nan(""));

    std::vector<double> cv(stats.size());
    for (std::size_t s = 0; s < stats.size(); ++s) {
        cv[s] = asymptotic_critical_value(stats[s], 1, cfg.alpha);
    }
    const double t_cv = num::normal_quantile(1.0 - cfg.alpha / 2.0);

    parallel_for(cfg.reps, [&](std::size_t r) {
        std::int8_t* out = outcome.data() + r * C;
        const StreamId data_stream = stream_for(cfg.seed, r, Purpose::data);
        auto plan_stream = [&](std::size_t s, std::size_t e) {
            return stream_for(cfg.seed, r, Purpose::permutation, s * E + e);
        };

        if (tail) {
            app::TailSample sample;
            try {
                sample = gen_tail(std::get<TailDesign>(cfg.dgp), data_stream);
                loglik[r] = app::normalized_loglik_ratio(app::vuong_contrast(sample));
            } catch (const Error&) {
                return;
            }
            for (std::size_t e = 0; e < E; ++e) {
                try {
                    const auto res = app::powerlaw_test(sample, cfg.alpha, rn[e], plan_stream(0, e));
                    out[0 * E + e] = res.decision == app::PowerlawDecision::favor_null ? hit : miss;
                    out[1 * E + e] = res.decision == app::PowerlawDecision::favor_powerlaw ? hit : miss;
                } catch (const Error&) {
                }
            }
            return;
        }

        // One column per hypothesis, each tested at mu.
        std::vector<DataMatrix> columns;
        std::vector<double> mus;
        std::optional<ClusterSample> cs;
        try {
            std::visit(overloaded{
                           [&](const ClusterDesign& d) {
                               cs = gen_cluster(d, data_stream);
                               for (const auto& h : hyps) {
                                   columns.push_back(cs->y);
                                   mus.push_back(h.value);
                               }
                           },
                           [&](const NetworkDesign& d) {
                               const auto g = gen_network(d, data_stream).graph;
                               const auto col = network_column(g, cfg.network_statistic);
                               for (const auto& h : hyps) {
                                   columns.push_back(col);
                                   mus.push_back(theta_star + h.value);
                               }
                           },
                           [&](const SpilloverDesign& d) {
                               const auto sp = gen_spillover(d, data_stream);
                               for (const auto& h : hyps) {
                                   columns.push_back(app::influence_ols(sp.regression, 2, h.value));
                                   mus.push_back(0.0);
                               }
                           },
                           [](const TailDesign&) {},
                       },
                       cfg.dgp);
        } catch (const Error&) {
            return;
        }

        std::vector<CovarianceEstimate> cov;
        for (std::size_t h = 0; h < H; ++h) {
            try {
                cov.push_back(num::sample_covariance(columns[h]));
            } catch (const Error&) {
                cov.push_back({});
            }
        }

        for (std::size_t s = 0; s < stats.size(); ++s) {
            for (std::size_t e = 0; e < E; ++e) {
                ResamplePlan plan;
                try {
                    plan = draw_plan(n, rn[s * E + e], plan_kind(stats[s]), plan_stream(s, e));
                } catch (const Error&) {
                    continue;
                }
                for (std::size_t h = 0; h < H; ++h) {
                    if (cov[h].sigma_hat.size() == 0) {
                        continue;
                    }
                    try {
                        const WhitenedData w(columns[h], cov[h], Vector::Constant(1, mus[h]));
                        const double t = w.evaluate(stats[s], plan);
                        out[(s * H + h) * E + e] = t > cv[s] ? hit : miss;
                    } catch (const Error&) {
                    }
                }
            }
        }

        if (t_tests) {
            const Vector y = cs->y.values().col(0);
            std::vector<std::uint32_t> own(static_cast<std::size_t>(y.size()));
            for (std::size_t i = 0; i < own.size(); ++i) {
                own[i] = static_cast<std::uint32_t>(i);
            }
            const std::vector<std::uint32_t>* labels[] = {&cs->city, &cs->family, &own};
            for (std::size_t h = 0; h < H; ++h) {
                for (std::size_t l = 0; l < 3; ++l) {
                    try {
                        const double t = cluster_t_stat(y, *labels[l], mus[h]);
                        out[resampled_cells + h * 3 + l] = std::abs(t) > t_cv ? hit : miss;
                    } catch (const Error&) {
                    }
                }
            }
        }
    });

    for (std::size_t r = 0; r < cfg.reps; ++r) {
        for (std::size_t c = 0; c < C; ++c) {
            auto& cell = report.cells[c];
            switch (outcome[r * C + c]) {
                case hit:
                    ++cell.hits;
                    ++cell.valid;
                    break;
                case miss:
                    ++cell.valid;
                    break;
                default:
                    ++cell.failures;
            }
        }
    }
    if (tail) {
        double sum = 0.0;
        std::size_t count = 0;
        for (double v : loglik) {
            if (!std::isnan(v)) {
                sum += v;
                ++count;
            }
        }
        report.summary["mean_LL"] = count ? sum / static_cast<double>(count) : std::nan("");
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace drinf::sim
