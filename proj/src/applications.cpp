#include "drinf/applications.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace drinf::app {

// ---------------------------------------------------------------------------
// OLS

namespace {

void check_regression(const RegressionData& data) {
    if (data.design.rows() != data.y.size()) {
        throw BadSize("design has " + std::to_string(data.design.rows()) + " rows, outcome has " +
                      std::to_string(data.y.size()));
    }
    if (data.design.cols() < 1 || data.design.rows() < data.design.cols()) {
        throw RankDeficient("design needs at least as many rows as columns");
    }
    Eigen::JacobiSVD<Matrix> svd(data.design);
    const Vector& sv = svd.singularValues();
    if (!(sv.minCoeff() > 1e-10 * sv.maxCoeff())) {
        throw RankDeficient("design matrix is rank deficient");
    }
}

}  // namespace

Vector ols_coefficients(const RegressionData& data) {
    check_regression(data);
    const Matrix gram = data.design.transpose() * data.design;
    return gram.ldlt().solve(data.design.transpose() * data.y);
}

DataMatrix influence_ols(const RegressionData& data, std::size_t j, double beta0j) {
    check_regression(data);
    if (j >= static_cast<std::size_t>(data.design.cols())) {
        throw BadSize("coefficient index out of range");
    }
    const auto n = static_cast<double>(data.design.rows());
    const Matrix gram = data.design.transpose() * data.design;
    Vector e = Vector::Zero(data.design.cols());
    e[static_cast<Eigen::Index>(j)] = 1.0;
    const Vector row = gram.ldlt().solve(e);  // j-th row of (D'D)^-1
    const Vector w = n * (data.design * row);  // W_j1 .. W_jn
    return DataMatrix::column(w.cwiseProduct(data.y).array() - beta0j);
}

// ---------------------------------------------------------------------------
// Graphs

Graph Graph::from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Graph g(n);
    for (const auto& [i, j] : edges) {
        if (i >= n || j >= n) {
            throw BadSize("edge endpoint out of range");
        }
        if (i != j) {
            g.add_edge_unchecked(i, j);
        }
    }
    g.finalize();
    return g;
}

void Graph::add_edge_unchecked(std::size_t i, std::size_t j) {
    adj_[i].push_back(static_cast<std::uint32_t>(j));
    adj_[j].push_back(static_cast<std::uint32_t>(i));
}

void Graph::finalize() {
    for (auto& list : adj_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

bool Graph::linked(std::size_t i, std::size_t j) const {
    const auto& list = adj_[i];
    return std::binary_search(list.begin(), list.end(), static_cast<std::uint32_t>(j));
}

std::size_t Graph::edge_count() const {
    std::size_t total = 0;
    for (const auto& list : adj_) {
        total += list.size();
    }
    return total / 2;
}

double individual_clustering(const Graph& g, std::size_t i) {
    const auto& nb = g.neighbors(i);
    const std::size_t d = nb.size();
    if (d <= 1) {
        return 0.0;
    }
    std::size_t closed = 0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a + 1; b < d; ++b) {
            if (g.linked(nb[a], nb[b])) {
                ++closed;
            }
        }
    }
    return static_cast<double>(closed) / (0.5 * static_cast<double>(d * (d - 1)));
}

std::vector<double> clustering_coefficients(const Graph& g) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out[i] = individual_clustering(g, i);
    }
    return out;
}

double avg_clustering(const Graph& g) {
    if (g.size() == 0) {
        return 0.0;
    }
    const auto cl = clustering_coefficients(g);
    double sum = 0.0;
    for (double c : cl) {
        sum += c;
    }
    return sum / static_cast<double>(g.size());
}

DataMatrix clustering_contrast(const Graph& g) {
    const std::size_t n = g.size();
    if (n < 2) {
        throw BadSize("clustering contrast needs at least 2 nodes");
    }
    Vector x(static_cast<Eigen::Index>(n));
    const double scale = 2.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(i)] =
            individual_clustering(g, i) - scale * static_cast<double>(g.degree(i));
    }
    return DataMatrix::column(x);
}

Vector degree_vector(const Graph& g) {
    Vector x(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        x[static_cast<Eigen::Index>(i)] = static_cast<double>(g.degree(i));
    }
    return x;
}

// ---------------------------------------------------------------------------
// Spillovers

namespace {

bool in_cell(const SpilloverUnit& u, const Cell& c) {
    return u.d == c.d && u.t == c.t && u.gamma == c.gamma;
}

std::size_t cell_count(const SpilloverData& data, const Cell& c) {
    return static_cast<std::size_t>(
        std::count_if(data.begin(), data.end(), [&](const SpilloverUnit& u) { return in_cell(u, c); }));
}

void check_units(const SpilloverData& data) {
    for (const auto& u : data) {
        if ((u.d != 0 && u.d != 1) || u.t > u.gamma || !std::isfinite(u.y)) {
            throw DomainError("spillover unit violates 0 <= T <= gamma, D in {0,1}");
        }
    }
}

}  // namespace

double spillover_estimate(const SpilloverData& data, const Cell& a, const Cell& b) {
    check_units(data);
    double sum_a = 0.0;
    double sum_b = 0.0;
    const std::size_t count_a = cell_count(data, a);
    const std::size_t count_b = cell_count(data, b);
    if (count_a == 0 || count_b == 0) {
        throw EmptyCell("spillover contrast has an empty cell");
    }
    for (const auto& u : data) {
        if (in_cell(u, a)) sum_a += u.y;
        if (in_cell(u, b)) sum_b += u.y;
    }
    return sum_a / static_cast<double>(count_a) - sum_b / static_cast<double>(count_b);
}

DataMatrix influence_spillover(const SpilloverData& data, const Cell& a, const Cell& b,
                               double beta0) {
    check_units(data);
    const std::size_t count_a = cell_count(data, a);
    const std::size_t count_b = cell_count(data, b);
    if (count_a == 0 || count_b == 0) {
        throw EmptyCell("spillover contrast has an empty cell");
    }
    const auto n = static_cast<double>(data.size());
    const double p_a = static_cast<double>(count_a) / n;
    const double p_b = static_cast<double>(count_b) / n;
    Vector x(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& u = data[i];
        x[static_cast<Eigen::Index>(i)] =
            (in_cell(u, a) ? u.y / p_a : 0.0) - (in_cell(u, b) ? u.y / p_b : 0.0) - beta0;
    }
    return DataMatrix::column(x);
}

// ---------------------------------------------------------------------------
// Power law test

void TailSample::validate() const {
    if (z.size() < 2) {
        throw BadSize("tail sample needs at least 2 observations");
    }
    if (!(x_min > 0.0) || !std::isfinite(x_min)) {
        throw DomainError("x_min must be positive");
    }
    for (double v : z) {
        if (!(v >= x_min) || !std::isfinite(v)) {
            throw DomainError("tail sample has a value below x_min");
        }
    }
}

double powerlaw_mle(const TailSample& s) {
    s.validate();
    double log_sum = 0.0;
    for (double v : s.z) {
        log_sum += std::log(v / s.x_min);
    }
    if (!(log_sum > 0.0)) {
        throw DegenerateSample("power law fit needs some observation above x_min");
    }
    return 1.0 + static_cast<double>(s.z.size()) / log_sum;
}

double exponential_mle(const TailSample& s) {
    s.validate();
    double sum = 0.0;
    for (double v : s.z) {
        sum += v;
    }
    const double excess = sum / static_cast<double>(s.z.size()) - s.x_min;
    if (!(excess > 0.0)) {
        throw DegenerateSample("exponential fit needs mean above x_min");
    }
    return 1.0 / excess;
}

namespace {

double powerlaw_logpdf(double z, double x_min, double alpha) {
    return std::log(alpha - 1.0) - std::log(x_min) - alpha * std::log(z / x_min);
}

double exponential_logpdf(double z, double x_min, double gamma) {
    return std::log(gamma) - gamma * (z - x_min);
}

}  // namespace

double powerlaw_loglik(const TailSample& s, double alpha) {
    double total = 0.0;
    for (double v : s.z) {
        total += powerlaw_logpdf(v, s.x_min, alpha);
    }
    return total;
}

double exponential_loglik(const TailSample& s, double gamma) {
    double total = 0.0;
    for (double v : s.z) {
        total += exponential_logpdf(v, s.x_min, gamma);
    }
    return total;
}

DataMatrix vuong_contrast(const TailSample& s) {
    const double alpha = powerlaw_mle(s);
    const double gamma = exponential_mle(s);
    Vector x(static_cast<Eigen::Index>(s.z.size()));
    for (std::size_t i = 0; i < s.z.size(); ++i) {
        x[static_cast<Eigen::Index>(i)] =
            powerlaw_logpdf(s.z[i], s.x_min, alpha) - exponential_logpdf(s.z[i], s.x_min, gamma);
    }
    return DataMatrix::column(x);
}

double normalized_loglik_ratio(const DataMatrix& contrast) {
    const auto cov = num::sample_covariance(contrast);
    const double mean = num::sample_mean(contrast)[0];
    return std::sqrt(static_cast<double>(contrast.n())) * mean / std::sqrt(cov.sigma_hat(0, 0));
}

const char* to_string(PowerlawDecision d) {
    switch (d) {
        case PowerlawDecision::favor_powerlaw:
            return "favor_powerlaw";
        case PowerlawDecision::favor_null:
            return "favor_null";
        case PowerlawDecision::inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

PowerlawTestResult powerlaw_test(const TailSample& s, double alpha, std::size_t rn,
                                 const StreamId& stream) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw BadConfig("alpha must lie in (0,1)");
    }
    PowerlawTestResult out;
    out.alpha_hat = powerlaw_mle(s);
    out.gamma_hat = exponential_mle(s);
    const DataMatrix x = vuong_contrast(s);
    const auto cov = num::sample_covariance(x);
    const WhitenedData data(x, cov, Vector::Zero(1));
    const auto plan = draw_plan(static_cast<std::size_t>(x.n()), rn, PlanKind::pair, stream);

    out.rn_used = rn;
    out.statistic = data.t_u(plan);
    out.critical_value = num::normal_quantile(1.0 - alpha);
    out.mean_contrast = num::sample_mean(x)[0];
    out.normalized_llr = std::sqrt(static_cast<double>(x.n())) * out.mean_contrast /
                         std::sqrt(cov.sigma_hat(0, 0));
    if (out.statistic <= out.critical_value) {
        out.decision = PowerlawDecision::inconclusive;
    } else if (out.mean_contrast > 0.0) {
        out.decision = PowerlawDecision::favor_powerlaw;
    } else {
        out.decision = PowerlawDecision::favor_null;
    }
    return out;
}

PowerlawTestResult powerlaw_test(const TailSample& s, double alpha, std::size_t rn,
                                 std::uint64_t seed) {
    return powerlaw_test(s, alpha, rn, stream_for(seed, 0, Purpose::permutation));
}

}  // namespace drinf::app
