#include "drinf/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace drinf::ineq {

Columns::Columns(const DataMatrix& x)
    : n_(static_cast<std::size_t>(x.n())), m_(static_cast<std::size_t>(x.m())) {
    x_ = x.values().transpose();
    mean_ = num::sample_mean(x);
    const Matrix centered = x_.colwise() - mean_;
    variance_ = centered.rowwise().squaredNorm() / static_cast<double>(n_);
    for (std::size_t k = 0; k < m_; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double scale = 64.0 * std::numeric_limits<double>::epsilon() *
                             x_.row(kk).cwiseAbs().maxCoeff();
        if (variance_[kk] <= scale * scale) {
            throw SingularCovariance("column " + std::to_string(k) + " has zero sample variance");
        }
    }
    standardized_ = variance_.cwiseSqrt().cwiseInverse().asDiagonal() * centered;
}

void Columns::check_plan(const ResamplePlan& plan) const {
    if (plan.kind != PlanKind::pair) {
        throw BadConfig("inequality statistics need a pair plan");
    }
    if (plan.n != n_) {
        throw BadSize("plan drawn for a different sample size");
    }
}

double Columns::t_u(const ResamplePlan& plan, std::size_t k, double mu_k) const {
    check_plan(plan);
    const auto kk = static_cast<Eigen::Index>(k);
    double acc = 0.0;
    for (std::size_t r = 0; r < plan.size(); ++r) {
        acc += (x_(kk, plan.first[r]) - mu_k) * (x_(kk, plan.second[r]) - mu_k);
    }
    return acc / variance_[kk] / std::sqrt(static_cast<double>(m_ * plan.size()));
}

double Columns::lambda_hat(const ResamplePlan& plan, std::size_t k) const {
    check_plan(plan);
    const auto kk = static_cast<Eigen::Index>(k);
    double sum = 0.0;
    for (std::size_t r = 0; r < plan.size(); ++r) {
        sum += x_(kk, plan.first[r]) + x_(kk, plan.second[r]);
    }
    const auto rn = static_cast<double>(plan.size());
    const auto m = static_cast<double>(m_);
    const double xbar = mean_[kk];
    const double inv_var = 1.0 / variance_[kk];
    return xbar * inv_var * sum / std::sqrt(m * rn) - std::sqrt(rn / m) * inv_var * xbar * xbar;
}

double Columns::q_tilde(const ResamplePlan& plan) const {
    check_plan(plan);
    const double* base = standardized_.data();
    const std::size_t rn = plan.size();
    double best;
    if (m_ == 1) {
        double acc = 0.0;
        for (std::size_t r = 0; r < rn; ++r) {
            acc += base[plan.first[r]] * base[plan.second[r]];
        }
        best = acc;
    } else {
        // Small fixed-size accumulator; m is tiny in practice.
        std::vector<double> acc(m_, 0.0);
        for (std::size_t r = 0; r < rn; ++r) {
            const double* zi = base + static_cast<std::size_t>(plan.first[r]) * m_;
            const double* zj = base + static_cast<std::size_t>(plan.second[r]) * m_;
            for (std::size_t k = 0; k < m_; ++k) {
                acc[k] += zi[k] * zj[k];
            }
        }
        best = *std::max_element(acc.begin(), acc.end());
    }
    return best / std::sqrt(static_cast<double>(m_ * rn));
}

double lambda_hat(const DataMatrix& x, const ResamplePlan& plan, std::size_t k) {
    if (k >= static_cast<std::size_t>(x.m())) {
        throw BadSize("column index out of range");
    }
    return Columns(x).lambda_hat(plan, k);
}

namespace {

IneqResult q_stat_from(const Columns& cols, const ResamplePlan& plan) {
    const auto m = static_cast<Eigen::Index>(cols.m());
    IneqResult out;
    out.q_components.resize(m);
    out.lambda_hat.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double lambda = cols.lambda_hat(plan, kk);
        out.lambda_hat[k] = lambda;
        out.q_components[k] = cols.t_u(plan, kk, 0.0) - (cols.mean()[k] < 0.0 ? lambda : 0.0);
    }
    out.q_stat = out.q_components.maxCoeff();
    out.decision_statistic = out.q_stat;
    out.rn_used = plan.size();
    return out;
}

std::size_t resolve_u_rn(const TestConfig& cfg, std::size_t n) {
    TestConfig u = cfg;
    u.statistic = StatisticKind::u_type;
    u.cv = CvMode::asymptotic;  // L is validated by the caller when it matters
    u.validate();
    return u.resolve_rn(n);
}

}  // namespace

IneqResult q_stat(const DataMatrix& x, const ResamplePlan& plan) {
    return q_stat_from(Columns(x), plan);
}

double q_stat_recentered(const DataMatrix& x, const ResamplePlan& plan) {
    const Columns cols(x);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cols.m(); ++k) {
        const double xbar = cols.mean()[static_cast<Eigen::Index>(k)];
        const double term = cols.t_u(plan, k, xbar) + (xbar >= 0.0 ? cols.lambda_hat(plan, k) : 0.0);
        best = std::max(best, term);
    }
    return best;
}

double q_tilde(const DataMatrix& x, const ResamplePlan& plan) {
    return Columns(x).q_tilde(plan);
}

namespace {

double critical_value_from(const Columns& cols, std::size_t rn, std::size_t L, double alpha,
                           const StreamId& stream) {
    if (L < 100) {
        throw BadConfig("resampled critical value needs L >= 100");
    }
    std::vector<double> draws(L);
    ResamplePlan plan;
    for (std::size_t l = 0; l < L; ++l) {
        Philox engine(stream, subplan_offset(l));
        fill_plan(engine, cols.n(), rn, PlanKind::pair, plan);
        draws[l] = cols.q_tilde(plan);
    }
    return empirical_critical_value(std::move(draws), alpha);
}

}  // namespace

double ineq_critical_value(const DataMatrix& x, std::size_t rn, std::size_t L, double alpha,
                           const StreamId& stream) {
    return critical_value_from(Columns(x), rn, L, alpha, stream);
}

double ineq_critical_value(const DataMatrix& x, std::size_t rn, std::size_t L, double alpha,
                           std::uint64_t seed) {
    return ineq_critical_value(x, rn, L, alpha, TestStreams::from_seed(seed).critical_value);
}

IneqResult test_inequality(const DataMatrix& x, const TestConfig& cfg, const TestStreams& streams) {
    const auto n = static_cast<std::size_t>(x.n());
    const std::size_t rn = resolve_u_rn(cfg, n);
    if (cfg.L < 100) {
        throw BadConfig("resampled critical value needs L >= 100");
    }
    const Columns cols(x);
    const ResamplePlan plan = draw_plan(n, rn, PlanKind::pair, streams.statistic);
    IneqResult out = q_stat_from(cols, plan);
    out.critical_value = critical_value_from(cols, rn, cfg.L, cfg.alpha, streams.critical_value);
    out.L_used = cfg.L;
    out.reject = out.decision_statistic > out.critical_value;
    return out;
}

IneqResult test_inequality(const DataMatrix& x, const TestConfig& cfg, std::uint64_t seed) {
    return test_inequality(x, cfg, TestStreams::from_seed(seed));
}

IneqResult test_inequality_scalar_asymptotic(const DataMatrix& x, const TestConfig& cfg,
                                             const TestStreams& streams) {
    if (x.m() != 1) {
        throw BadSize("scalar asymptotic inequality test needs m = 1");
    }
    const auto n = static_cast<std::size_t>(x.n());
    const std::size_t rn = resolve_u_rn(cfg, n);
    const Columns cols(x);
    const ResamplePlan plan = draw_plan(n, rn, PlanKind::pair, streams.statistic);
    IneqResult out = q_stat_from(cols, plan);
    const double correction = cols.mean()[0] < 0.0 ? out.lambda_hat[0] : 0.0;
    out.decision_statistic = out.q_stat - correction;
    out.critical_value = num::normal_quantile(1.0 - cfg.alpha);
    out.reject = out.decision_statistic > out.critical_value;
    return out;
}

IneqResult test_inequality_scalar_asymptotic(const DataMatrix& x, const TestConfig& cfg,
                                             std::uint64_t seed) {
    return test_inequality_scalar_asymptotic(x, cfg, TestStreams::from_seed(seed));
}

}  // namespace drinf::ineq
