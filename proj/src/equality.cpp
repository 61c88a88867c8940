#include "drinf/equality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drinf {

namespace {

double rule_value(std::size_t n, StatisticKind statistic, double delta) {
    const auto nd = static_cast<double>(n);
    if (statistic == StatisticKind::mean_type) {
        return delta == 1.0 ? std::sqrt(nd) : std::pow(nd, 0.5 * delta);
    }
    return std::pow(std::pow(nd, delta) / 2.0, 4.0 / 3.0);
}

num::Distribution reference_distribution(StatisticKind statistic, std::size_t m) {
    return statistic == StatisticKind::u_type
               ? num::Distribution::std_normal()
               : num::Distribution::chi_square(static_cast<double>(m));
}

}  // namespace

std::size_t rn_default(std::size_t n, StatisticKind statistic, double epsilon, double delta) {
    if (n < 2) {
        throw BadConfig("R_n rule needs n >= 2");
    }
    if (!(epsilon > 0.0)) {
        throw BadConfig("R_n rule needs epsilon > 0");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw BadConfig("R_n rule needs delta in (0,1]");
    }
    // Whole base count first, then the scaled count rounded to nearest. The
    // relative nudge keeps exact bases such as sqrt(400) from flooring to 19.
    const double base = std::floor(rule_value(n, statistic, delta) * (1.0 + 1e-12));
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(epsilon * base)));
}

void TestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw BadConfig("alpha must lie in (0,1)");
    }
    if (const auto* explicit_rn = std::get_if<std::size_t>(&rn)) {
        if (*explicit_rn < 2) {
            throw BadConfig("R_n must be >= 2");
        }
    } else {
        const auto& rule = std::get<RnRule>(rn);
        if (!(rule.epsilon > 0.0)) {
            throw BadConfig("R_n rule needs epsilon > 0");
        }
        if (!(rule.delta > 0.0 && rule.delta <= 1.0)) {
            throw BadConfig("R_n rule needs delta in (0,1]");
        }
    }
    if (cv == CvMode::permutation && L < 100) {
        throw BadConfig("permutation critical values need L >= 100");
    }
}

std::size_t TestConfig::resolve_rn(std::size_t n) const {
    if (const auto* explicit_rn = std::get_if<std::size_t>(&rn)) {
        return *explicit_rn;
    }
    const auto& rule = std::get<RnRule>(rn);
    return rn_default(n, statistic, rule.epsilon, rule.delta);
}

// ---------------------------------------------------------------------------

WhitenedData::WhitenedData(const DataMatrix& x, const Vector& mu)
    : WhitenedData(x, num::sample_covariance(x), mu) {}

WhitenedData::WhitenedData(const DataMatrix& x, const CovarianceEstimate& cov, const Vector& mu)
    : n_(static_cast<std::size_t>(x.n())), m_(static_cast<std::size_t>(x.m())) {
    if (mu.size() != x.m()) {
        throw BadSize("mu has " + std::to_string(mu.size()) + " entries, data has " +
                      std::to_string(x.m()) + " columns");
    }
    z_ = cov.inv_sqrt * (x.values().rowwise() - mu.transpose()).transpose();
}

MeanTypeValue WhitenedData::t_mean(const ResamplePlan& plan) const {
    if (plan.kind != PlanKind::single) {
        throw BadConfig("mean-type statistic needs a single-index plan");
    }
    if (plan.n != n_) {
        throw BadSize("plan drawn for a different sample size");
    }
    Vector sum = Vector::Zero(static_cast<Eigen::Index>(m_));
    const double* base = z_.data();
    for (std::uint32_t i : plan.first) {
        const double* zi = base + static_cast<std::size_t>(i) * m_;
        for (std::size_t k = 0; k < m_; ++k) {
            sum[static_cast<Eigen::Index>(k)] += zi[k];
        }
    }
    MeanTypeValue out;
    out.tilde = sum / std::sqrt(static_cast<double>(plan.size()));
    out.value = out.tilde.squaredNorm();
    return out;
}

double WhitenedData::t_u(const ResamplePlan& plan) const {
    if (plan.kind != PlanKind::pair) {
        throw BadConfig("U-type statistic needs a pair plan");
    }
    if (plan.n != n_) {
        throw BadSize("plan drawn for a different sample size");
    }
    const double* base = z_.data();
    const std::size_t rn = plan.size();
    double acc = 0.0;
    if (m_ == 1) {
        for (std::size_t r = 0; r < rn; ++r) {
            acc += base[plan.first[r]] * base[plan.second[r]];
        }
    } else {
        for (std::size_t r = 0; r < rn; ++r) {
            const double* zi = base + static_cast<std::size_t>(plan.first[r]) * m_;
            const double* zj = base + static_cast<std::size_t>(plan.second[r]) * m_;
            for (std::size_t k = 0; k < m_; ++k) {
                acc += zi[k] * zj[k];
            }
        }
    }
    return acc / std::sqrt(static_cast<double>(m_ * rn));
}

double WhitenedData::evaluate(StatisticKind statistic, const ResamplePlan& plan) const {
    return statistic == StatisticKind::u_type ? t_u(plan) : t_mean(plan).value;
}

MeanTypeValue t_mean(const DataMatrix& x, const Vector& mu, const ResamplePlan& plan) {
    return WhitenedData(x, mu).t_mean(plan);
}

double t_u(const DataMatrix& x, const Vector& mu, const ResamplePlan& plan) {
    return WhitenedData(x, mu).t_u(plan);
}

// ---------------------------------------------------------------------------

double asymptotic_critical_value(StatisticKind statistic, std::size_t m, double alpha) {
    return num::dist_quantile(reference_distribution(statistic, m), 1.0 - alpha);
}

double empirical_critical_value(std::vector<double> values, double alpha) {
    if (values.empty()) {
        throw BadConfig("empirical critical value needs at least one draw");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw BadConfig("alpha must lie in (0,1)");
    }
    const std::size_t L = values.size();
    // Largest count of exceedances allowed: floor(alpha L), guarded against
    // alpha * L landing just below an integer.
    const auto allowed = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(L) + 1e-9));
    const std::size_t k = allowed >= L ? 1 : L - allowed;  // 1-based order statistic
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

TestStreams TestStreams::from_seed(std::uint64_t seed) {
    return {stream_for(seed, 0, Purpose::permutation), stream_for(seed, 0, Purpose::critical_value)};
}

namespace {

std::vector<double> recentered_draws(const DataMatrix& x, const CovarianceEstimate& cov,
                                     StatisticKind statistic, std::size_t rn, std::size_t L,
                                     const StreamId& stream) {
    const WhitenedData centered(x, cov, num::sample_mean(x));
    std::vector<double> values(L);
    ResamplePlan plan;
    const auto n = static_cast<std::size_t>(x.n());
    for (std::size_t l = 0; l < L; ++l) {
        Philox engine(stream, subplan_offset(l));
        fill_plan(engine, n, rn, plan_kind(statistic), plan);
        values[l] = centered.evaluate(statistic, plan);
    }
    return values;
}

}  // namespace

double permutation_critical_value(const DataMatrix& x, StatisticKind statistic, std::size_t rn,
                                  std::size_t L, double alpha, const StreamId& stream) {
    if (L < 100) {
        throw BadConfig("permutation critical values need L >= 100");
    }
    const auto cov = num::sample_covariance(x);
    return empirical_critical_value(recentered_draws(x, cov, statistic, rn, L, stream), alpha);
}

double permutation_critical_value(const DataMatrix& x, StatisticKind statistic, std::size_t rn,
                                  std::size_t L, double alpha, std::uint64_t seed) {
    return permutation_critical_value(x, statistic, rn, L, alpha,
                                      TestStreams::from_seed(seed).critical_value);
}

TestResult test_equality(const DataMatrix& x, const Vector& mu, const TestConfig& cfg,
                         const TestStreams& streams) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(x.n());
    const auto m = static_cast<std::size_t>(x.m());
    const std::size_t rn = cfg.resolve_rn(n);

    const auto cov = num::sample_covariance(x);
    const WhitenedData data(x, cov, mu);
    const ResamplePlan plan = draw_plan(n, rn, plan_kind(cfg.statistic), streams.statistic);

    TestResult out;
    out.rn_used = rn;
    if (cfg.statistic == StatisticKind::mean_type) {
        auto mv = data.t_mean(plan);
        out.statistic_value = mv.value;
        out.tilde_vector = std::move(mv.tilde);
    } else {
        out.statistic_value = data.t_u(plan);
    }

    if (cfg.cv == CvMode::asymptotic) {
        out.critical_value = asymptotic_critical_value(cfg.statistic, m, cfg.alpha);
        out.p_value = num::dist_sf(reference_distribution(cfg.statistic, m), out.statistic_value);
    } else {
        out.critical_value = empirical_critical_value(
            recentered_draws(x, cov, cfg.statistic, rn, cfg.L, streams.critical_value), cfg.alpha);
        out.diagnostics["L"] = static_cast<double>(cfg.L);
    }
    out.reject = out.statistic_value > out.critical_value;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov.sigma_hat, Eigen::EigenvaluesOnly);
    out.diagnostics["sigma_min_eigenvalue"] = eig.eigenvalues().minCoeff();
    out.diagnostics["sigma_condition_number"] =
        eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    return out;
}

TestResult test_equality(const DataMatrix& x, const Vector& mu, const TestConfig& cfg,
                         std::uint64_t seed) {
    return test_equality(x, mu, cfg, TestStreams::from_seed(seed));
}

// ---------------------------------------------------------------------------

Interval ci_mean(const DataMatrix& x, double alpha, const ResamplePlan& plan) {
    if (x.m() != 1) {
        throw BadSize("confidence interval needs scalar data");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw BadConfig("alpha must lie in (0,1)");
    }
    if (plan.kind != PlanKind::single || plan.n != static_cast<std::size_t>(x.n())) {
        throw BadConfig("interval needs a single-index plan for this sample");
    }
    const auto cov = num::sample_covariance(x);
    double sum = 0.0;
    for (std::uint32_t i : plan.first) {
        sum += x(i, 0);
    }
    const auto rn = static_cast<double>(plan.size());
    Interval out;
    out.center = sum / rn;
    out.half_width = num::normal_quantile(1.0 - alpha / 2.0) * std::sqrt(cov.sigma_hat(0, 0)) /
                     std::sqrt(rn);
    return out;
}

Interval ci_mean(const DataMatrix& x, double alpha, std::size_t rn, std::uint64_t seed) {
    return ci_mean(x, alpha,
                   draw_plan(static_cast<std::size_t>(x.n()), rn, PlanKind::single,
                             stream_for(seed, 0, Purpose::permutation)));
}

// ---------------------------------------------------------------------------

DrawSet::DrawSet(const DataMatrix& x, StatisticKind statistic, std::size_t rn, std::size_t L,
                 const StreamId& stream)
    : statistic_(statistic), rn_(rn), m_(static_cast<std::size_t>(x.m())) {
    if (L < 1) {
        throw BadConfig("randomized confidence function needs L >= 1");
    }
    const auto cov = num::sample_covariance(x);
    xbar_ = num::sample_mean(x);
    inv_sqrt_ = cov.inv_sqrt;
    sigma_inv_ = cov.inv_sqrt * cov.inv_sqrt;
    const Matrix y = (x.values().rowwise() - xbar_.transpose()).transpose();  // m x n
    const Matrix ay = sigma_inv_ * y;

    const auto n = static_cast<std::size_t>(x.n());
    ResamplePlan plan;
    cross_.resize(L, 0.0);
    sums_.assign(L, Vector::Zero(static_cast<Eigen::Index>(m_)));
    for (std::size_t l = 0; l < L; ++l) {
        Philox engine(stream, subplan_offset(l));
        fill_plan(engine, n, rn, plan_kind(statistic), plan);
        Vector& s = sums_[l];
        if (statistic == StatisticKind::mean_type) {
            for (std::uint32_t i : plan.first) {
                s += y.col(i);
            }
            continue;
        }
        double cross = 0.0;
        for (std::size_t r = 0; r < plan.size(); ++r) {
            const auto i = plan.first[r];
            const auto j = plan.second[r];
            cross += y.col(i).dot(ay.col(j));
            s += y.col(i) + y.col(j);
        }
        cross_[l] = cross;
    }
}

double DrawSet::statistic(std::size_t l, const Vector& mu) const {
    const Vector d = mu - xbar_;
    const auto rn = static_cast<double>(rn_);
    if (statistic_ == StatisticKind::mean_type) {
        const Vector tilde = inv_sqrt_ * (sums_[l] - rn * d) / std::sqrt(rn);
        return tilde.squaredNorm();
    }
    const Vector ad = sigma_inv_ * d;
    const double value = cross_[l] - ad.dot(sums_[l]) + rn * d.dot(ad);
    return value / std::sqrt(static_cast<double>(m_) * rn);
}

double DrawSet::confidence(const Vector& mu, double level_alpha) const {
    const double crit = asymptotic_critical_value(statistic_, m_, level_alpha);
    std::size_t accepted = 0;
    for (std::size_t l = 0; l < L(); ++l) {
        if (statistic(l, mu) <= crit) {
            ++accepted;
        }
    }
    return static_cast<double>(accepted) / static_cast<double>(L());
}

double randomized_confidence_function(const DataMatrix& x, const Vector& mu, double alpha,
                                      StatisticKind statistic, std::size_t rn, std::size_t L,
                                      std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw BadConfig("alpha must lie in (0,1)");
    }
    const DrawSet draws(x, statistic, rn, L, stream_for(seed, 0, Purpose::critical_value));
    return draws.confidence(mu, alpha);
}

std::vector<double> confidence_region_grid(const DataMatrix& x, double alpha, double beta,
                                           const std::vector<double>& grid,
                                           StatisticKind statistic, std::size_t rn,
                                           std::size_t L, std::uint64_t seed) {
    if (x.m() != 1) {
        throw BadSize("grid confidence region needs scalar data");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw BadConfig("alpha must lie in (0,1)");
    }
    if (!(beta > 0.0 && beta < alpha)) {
        throw BadConfig("beta must lie in (0, alpha)");
    }
    const DrawSet draws(x, statistic, rn, L, stream_for(seed, 0, Purpose::critical_value));
    std::vector<double> region;
    Vector mu(1);
    for (double g : grid) {
        mu[0] = g;
        // Tolerance absorbs the rounding of 1 - alpha against count / L.
        if (draws.confidence(mu, alpha - beta) >= 1.0 - alpha - 1e-12) {
            region.push_back(g);
        }
    }
    return region;
}

}  // namespace drinf
