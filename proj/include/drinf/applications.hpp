#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "drinf/equality.hpp"

namespace drinf::app {

// ---------------------------------------------------------------------------
// Regression with unknown dependence

struct RegressionData {
    Vector y;
    Matrix design;  // n x k
};

/// Influence contributions X_i = W_ji Y_i - beta0j with W = n (D'D)^-1 D'.
/// The sample mean of X equals the OLS coefficient minus beta0j.
/// Throws RankDeficient when D is (numerically) rank deficient.
DataMatrix influence_ols(const RegressionData& data, std::size_t j, double beta0j);

// OLS coefficients via the same normal equations; used for reporting.
Vector ols_coefficients(const RegressionData& data);

// ---------------------------------------------------------------------------
// Networks

/// Undirected simple graph, adjacency lists sorted ascending.
class Graph {
  public:
    explicit Graph(std::size_t n = 0) : adj_(n) {}

    // Edges with i == j are dropped; duplicates are ignored.
    static Graph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    std::size_t size() const { return adj_.size(); }
    std::size_t degree(std::size_t i) const { return adj_[i].size(); }
    const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return adj_[i]; }
    bool linked(std::size_t i, std::size_t j) const;
    std::size_t edge_count() const;

    // Caller guarantees i != j and the edge is new; adjacency is re-sorted by finalize().
    void add_edge_unchecked(std::size_t i, std::size_t j);
    void finalize();

  private:
    std::vector<std::vector<std::uint32_t>> adj_;
};

double individual_clustering(const Graph& g, std::size_t i);
std::vector<double> clustering_coefficients(const Graph& g);
double avg_clustering(const Graph& g);

/// X_i = Cl_i - (2 / (n - 1)) deg_i.
DataMatrix clustering_contrast(const Graph& g);

// Degree and clustering columns for inference on network averages.
Vector degree_vector(const Graph& g);

// ---------------------------------------------------------------------------
// Treatment spillovers

struct SpilloverUnit {
    double y = 0.0;
    int d = 0;           // treatment, 0 or 1
    std::size_t t = 0;   // treated neighbors
    std::size_t gamma = 0;  // degree
};

using SpilloverData = std::vector<SpilloverUnit>;

struct Cell {
    int d = 0;
    std::size_t t = 0;
    std::size_t gamma = 0;
};

/// Two-ratio contrast of cell means; throws EmptyCell when either cell is empty.
double spillover_estimate(const SpilloverData& data, const Cell& a, const Cell& b);

/// X_i = Y_i 1_i(a) / p_a - Y_i 1_i(b) / p_b - beta0, p the cell frequencies.
DataMatrix influence_spillover(const SpilloverData& data, const Cell& a, const Cell& b,
                               double beta0);

// ---------------------------------------------------------------------------
// Power laws versus a reference distribution

struct TailSample {
    std::vector<double> z;
    double x_min = 1.0;

    // Throws DomainError unless every z_i >= x_min > 0 and size >= 2.
    void validate() const;
};

// Continuous power law MLE: 1 + n / sum log(z_i / x_min).
double powerlaw_mle(const TailSample& s);
// Shifted exponential MLE: 1 / (mean(z) - x_min).
double exponential_mle(const TailSample& s);

double powerlaw_loglik(const TailSample& s, double alpha);
double exponential_loglik(const TailSample& s, double gamma);

/// Per-observation log-likelihood ratio of the fitted power law over the
/// fitted exponential.
DataMatrix vuong_contrast(const TailSample& s);

// sqrt(n) * mean(X) / Sigma^1/2 on the contrast data.
double normalized_loglik_ratio(const DataMatrix& contrast);

enum class PowerlawDecision { favor_powerlaw, favor_null, inconclusive };

const char* to_string(PowerlawDecision d);

struct PowerlawTestResult {
    PowerlawDecision decision = PowerlawDecision::inconclusive;
    double statistic = 0.0;  // T_U(0) on the contrast
    double critical_value = 0.0;
    double mean_contrast = 0.0;
    double normalized_llr = 0.0;
    double alpha_hat = 0.0;
    double gamma_hat = 0.0;
    std::size_t rn_used = 0;
};

/// Dependence-robust Vuong comparison. X-bar == 0 with a significant
/// statistic resolves to favor_null.
PowerlawTestResult powerlaw_test(const TailSample& s, double alpha, std::size_t rn,
                                 const StreamId& stream);
PowerlawTestResult powerlaw_test(const TailSample& s, double alpha, std::size_t rn,
                                 std::uint64_t seed);

}  // namespace drinf::app
