#pragma once

#include <cstddef>
#include <cstdint>

#include "drinf/equality.hpp"

namespace drinf::ineq {

/// Outcome of a moment-inequality test of H0: E[X_1] <= 0 (componentwise).
struct IneqResult {
    double q_stat = 0.0;       // Q_n = max of q_components
    Vector q_components;       // T_{U,k}(0) - lambda_k 1{xbar_k < 0}
    Vector lambda_hat;
    double decision_statistic = 0.0;  // what is compared to critical_value
    double critical_value = 0.0;
    bool reject = false;
    std::size_t rn_used = 0;
    std::size_t L_used = 0;
};

/// Per-column scalar summaries shared by every inequality computation.
///
/// T_{U,k} is the U-type statistic of column k alone, normalized by
/// (m R_n)^-1/2 with m the full dimension. That normalization is the one under
/// which lambda_hat and the two forms of Q_n agree exactly; it rescales Q_n
/// and Q-tilde by the same constant, so decisions are unaffected.
class Columns {
  public:
    // Throws SingularCovariance when some Sigma_kk is at the floor.
    explicit Columns(const DataMatrix& x);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    const Vector& mean() const { return mean_; }
    const Vector& variance() const { return variance_; }

    // T_{U,k}(mu_k; plan) for one column.
    double t_u(const ResamplePlan& plan, std::size_t k, double mu_k) const;
    double lambda_hat(const ResamplePlan& plan, std::size_t k) const;
    // max_k T_{U,k}(xbar_k; plan), single pass over the plan.
    double q_tilde(const ResamplePlan& plan) const;

  private:
    void check_plan(const ResamplePlan& plan) const;

    std::size_t n_;
    std::size_t m_;
    Matrix x_;  // m x n raw data, column i is unit i
    Vector mean_;
    Vector variance_;
    Matrix standardized_;  // m x n, (x_ik - xbar_k) / sqrt(Sigma_kk)
};

double lambda_hat(const DataMatrix& x, const ResamplePlan& plan, std::size_t k);

/// Q_n from its definition: max_k { T_{U,k}(0) - lambda_k 1{xbar_k < 0} }.
IneqResult q_stat(const DataMatrix& x, const ResamplePlan& plan);

/// Q_n from the recentered form max_k { T_{U,k}(xbar_k) + lambda_k 1{xbar_k >= 0} }.
double q_stat_recentered(const DataMatrix& x, const ResamplePlan& plan);

double q_tilde(const DataMatrix& x, const ResamplePlan& plan);

/// c_{L,1-alpha}: empirical quantile of Q-tilde over L independent pair plans.
double ineq_critical_value(const DataMatrix& x, std::size_t rn, std::size_t L, double alpha,
                           const StreamId& stream);
double ineq_critical_value(const DataMatrix& x, std::size_t rn, std::size_t L, double alpha,
                           std::uint64_t seed);

/// Resampled-critical-value test. cfg.statistic and cfg.cv are ignored: the
/// statistic is always U-type and the critical value always resampled with
/// cfg.L draws.
IneqResult test_inequality(const DataMatrix& x, const TestConfig& cfg, const TestStreams& streams);
IneqResult test_inequality(const DataMatrix& x, const TestConfig& cfg, std::uint64_t seed);

/// Scalar variant: reject iff Q_n - lambda 1{xbar < 0} > z_{1-alpha}.
/// Throws BadSize when m != 1.
IneqResult test_inequality_scalar_asymptotic(const DataMatrix& x, const TestConfig& cfg,
                                             const TestStreams& streams);
IneqResult test_inequality_scalar_asymptotic(const DataMatrix& x, const TestConfig& cfg,
                                             std::uint64_t seed);

}  // namespace drinf::ineq
