#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "drinf/applications.hpp"
#include "drinf/equality.hpp"

namespace drinf::sim {

// ---------------------------------------------------------------------------
// Designs

enum class EffectLevel { family, city, none };

/// Y = theta0 + a_g + e with a_g, e iid N(0,1); g is the family or the city.
/// n_f families are split evenly over n_c cities and n_i individuals evenly
/// over families, so n_i is the sample size.
struct ClusterDesign {
    std::size_t n_c = 20;
    std::size_t n_f = 100;
    std::size_t n_i = 200;
    double theta0 = 1.0;
    EffectLevel effect = EffectLevel::family;
};

/// Geometric strategic network, built in two rounds: round one links pairs
/// within radius r_n on theta1 + (Z_i + Z_j) theta2 + zeta_ij > 0, round two
/// adds theta3 for pairs with a common round-one neighbour, same zeta.
struct NetworkDesign {
    std::size_t n = 500;
    std::array<double, 4> theta{-1.0, 0.25, 0.25, 1.0};
    double radius = 0.0;  // 0 means sqrt(3.6 / n)

    double effective_radius() const;
};

struct SpilloverDesign {
    NetworkDesign network;
    std::array<double, 4> beta{1.0, 0.5, -1.0, 0.5};
    double p_treat = 0.3;
};

enum class TailFamily { exponential, powerlaw };

/// Exponential(parameter) shifted to x_min, or a power law with exponent
/// `parameter` and lower support point x_min.
struct TailDesign {
    std::size_t n = 500;
    TailFamily family = TailFamily::exponential;
    double parameter = 0.5;
    double x_min = 1.0;
};

using DgpSpec = std::variant<ClusterDesign, NetworkDesign, SpilloverDesign, TailDesign>;

// Throws BadSpec.
void validate(const DgpSpec& spec);
std::string design_name(const DgpSpec& spec);
std::size_t sample_size(const DgpSpec& spec);

// ---------------------------------------------------------------------------
// Generators. Each consumes only the given stream.

struct ClusterSample {
    DataMatrix y;
    std::vector<std::uint32_t> family;
    std::vector<std::uint32_t> city;
};

struct NetworkSample {
    app::Graph graph;
    std::vector<int> z;
    Matrix position;  // n x 2
};

struct SpilloverSample {
    app::Graph graph;
    app::SpilloverData units;
    app::RegressionData regression;  // design columns (1, D, T, gamma)
};

ClusterSample gen_cluster(const ClusterDesign& d, const StreamId& stream);
NetworkSample gen_network(const NetworkDesign& d, const StreamId& stream);
SpilloverSample gen_spillover(const SpilloverDesign& d, const StreamId& stream);
app::TailSample gen_tail(const TailDesign& d, const StreamId& stream);

/// CR0 cluster-robust t statistic for the mean, (ybar - theta) / se with
/// se^2 = sum_g (sum_{i in g} (y_i - ybar))^2 / n^2.
double cluster_t_stat(const Vector& y, const std::vector<std::uint32_t>& cluster, double theta);

// ---------------------------------------------------------------------------
// Experiments

enum class NetworkStatistic { clustering, degree };

struct Hypothesis {
    std::string label;  // row label, e.g. "Size"
    double value = 0.0;
};

struct ExperimentConfig {
    DgpSpec dgp = ClusterDesign{};
    std::vector<StatisticKind> statistics{StatisticKind::mean_type, StatisticKind::u_type};
    std::vector<double> eps_grid{0.6, 0.8, 1.0, 1.2, 1.4};
    double alpha = 0.05;
    std::size_t reps = 2000;
    std::uint64_t seed = 0;

    /// Hypothesized values. Empty selects the design defaults: cluster
    /// theta0 and theta0 + 0.5; spillover beta3 and -1.8; network offsets
    /// 0 and +0.08 (clustering) or +0.8 (degree) from the calibrated mean.
    std::vector<Hypothesis> hypotheses;

    NetworkStatistic network_statistic = NetworkStatistic::clustering;
    std::size_t calibration_reps = 0;  // 0 means reps
    bool t_tests = false;              // cluster design only
};

std::vector<Hypothesis> default_hypotheses(const ExperimentConfig& cfg);

struct CellResult {
    std::string statistic;  // "M", "U" or "t"
    std::string row;        // hypothesis label or outcome label
    std::string column;     // epsilon, or cluster level for t-tests
    std::size_t rn = 0;     // 0 where not applicable
    std::size_t hits = 0;   // rejections, or decisions of this kind
    std::size_t valid = 0;
    std::size_t failures = 0;

    // 100 * hits / valid; NaN when no replication produced a result.
    double percent() const;
};

struct ExperimentReport {
    std::string design;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::vector<CellResult> cells;
    std::map<std::string, double> summary;  // e.g. theta_star, mean LL per column

    // Throws BadSpec when absent.
    const CellResult& cell(const std::string& statistic, const std::string& row,
                           const std::string& column) const;

    /// Table layout: for each statistic, one line per row label and a
    /// final R_n line, columns in grid order. Timing is left out unless asked
    /// for, so that equal inputs give equal bytes.
    std::string to_tsv(bool with_timing = false) const;
    std::string to_json(bool with_timing = false) const;
};

std::string format_eps(double eps);

/// Runs cfg.reps replications. Replication r draws its data from
/// stream_for(seed, r, data) and cell c's plan from
/// stream_for(seed, r, permutation, c); results do not depend on the worker
/// count. Per-replication errors are counted in `failures`. Throws BadSpec for
/// an invalid design or reps == 0.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Monte Carlo mean of the chosen network statistic (average clustering or
/// average degree) over `reps` draws from the calibration streams.
double calibrate_network_mean(const NetworkDesign& d, NetworkStatistic stat, std::size_t reps,
                              std::uint64_t seed);

}  // namespace drinf::sim
