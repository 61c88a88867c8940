#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drinf/numkernel.hpp"
#include "drinf/resample.hpp"

namespace drinf {

enum class StatisticKind { mean_type, u_type };

enum class CvMode { asymptotic, permutation };

/// R_n chosen as round(epsilon * floor(rule(n))), see rn_default.
struct RnRule {
    double epsilon = 1.0;
    double delta = 1.0;
};

struct TestConfig {
    StatisticKind statistic = StatisticKind::u_type;
    double alpha = 0.05;
    std::variant<std::size_t, RnRule> rn = RnRule{};
    CvMode cv = CvMode::asymptotic;
    std::size_t L = 1000;  // permutation draws, used when cv == permutation

    // Throws BadConfig.
    void validate() const;
    std::size_t resolve_rn(std::size_t n) const;
};

struct TestResult {
    double statistic_value = 0.0;
    Vector tilde_vector;  // mean-type only
    double critical_value = 0.0;
    std::optional<double> p_value;  // asymptotic mode only
    bool reject = false;
    std::size_t rn_used = 0;
    std::map<std::string, double> diagnostics;
};

/// Rule-of-thumb number of resampling draws.
///
/// `delta` is the rate exponent of the mean: X-bar is n^(delta/2)-consistent,
/// so delta = 1 is the usual root-n case. Mean-type uses n^(delta/2),
/// U-type uses (n^delta / 2)^(4/3). The result is
/// round(epsilon * floor(rule)), clamped to at least 2; for epsilon = 1 this
/// is floor(rule).
std::size_t rn_default(std::size_t n, StatisticKind statistic, double epsilon = 1.0,
                       double delta = 1.0);

struct MeanTypeValue {
    Vector tilde;
    double value = 0.0;  // tilde' tilde
};

/// Data whitened once around a center mu, so that many plans can be scored
/// cheaply. Row i of the whitened data is Sigma^-1/2 (X_i - mu) with Sigma the
/// full-sample covariance.
class WhitenedData {
  public:
    WhitenedData(const DataMatrix& x, const Vector& mu);
    WhitenedData(const DataMatrix& x, const CovarianceEstimate& cov, const Vector& mu);

    MeanTypeValue t_mean(const ResamplePlan& plan) const;
    double t_u(const ResamplePlan& plan) const;
    // T_M (scalar form) or T_U.
    double evaluate(StatisticKind statistic, const ResamplePlan& plan) const;

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }

  private:
    std::size_t n_;
    std::size_t m_;
    // m x n, column i is unit i.
    Matrix z_;
};

MeanTypeValue t_mean(const DataMatrix& x, const Vector& mu, const ResamplePlan& plan);
double t_u(const DataMatrix& x, const Vector& mu, const ResamplePlan& plan);

/// Plan kind a statistic consumes.
constexpr PlanKind plan_kind(StatisticKind s) {
    return s == StatisticKind::mean_type ? PlanKind::single : PlanKind::pair;
}

/// Asymptotic critical value: z_{1-alpha} (U-type) or chi-square_m q_{1-alpha}.
double asymptotic_critical_value(StatisticKind statistic, std::size_t m, double alpha);

/// Empirical (1 - alpha) quantile inf{c : L^-1 #{v > c} <= alpha}, i.e. the
/// ceil((1 - alpha) L)-th order statistic. Throws BadConfig on empty input.
double empirical_critical_value(std::vector<double> values, double alpha);

/// Streams used by one test evaluation: the observed statistic's plan, and the
/// base stream for the L permutation plans (sub-plan l starts at
/// subplan_offset(l)).
struct TestStreams {
    StreamId statistic;
    StreamId critical_value;

    static TestStreams from_seed(std::uint64_t seed);
};

TestResult test_equality(const DataMatrix& x, const Vector& mu, const TestConfig& cfg,
                         const TestStreams& streams);
TestResult test_equality(const DataMatrix& x, const Vector& mu, const TestConfig& cfg,
                         std::uint64_t seed);

struct Interval {
    double center = 0.0;
    double half_width = 0.0;
    double lower() const { return center - half_width; }
    double upper() const { return center + half_width; }
};

// Mean-type interval for scalar data. Throws BadSize when m != 1.
Interval ci_mean(const DataMatrix& x, double alpha, const ResamplePlan& plan);
Interval ci_mean(const DataMatrix& x, double alpha, std::size_t rn, std::uint64_t seed);

/// Permutation critical value from L statistics recentered at X-bar.
double permutation_critical_value(const DataMatrix& x, StatisticKind statistic, std::size_t rn,
                                  std::size_t L, double alpha, const StreamId& stream);
double permutation_critical_value(const DataMatrix& x, StatisticKind statistic, std::size_t rn,
                                  std::size_t L, double alpha, std::uint64_t seed);

/// L fixed draw sets, reduced to sufficient statistics so that the statistic
/// can be re-evaluated at any mu without touching the data again.
///
/// Exact rewrite: with y_i = X_i - X-bar, A = Sigma^-1 and d = mu - X-bar,
///   T_U(mu)     = (mR)^-1/2 [ sum y_i'A y_j - d'A sum(y_i + y_j) + R d'A d ]
///   tilde_M(mu) = R^-1/2 Sigma^-1/2 [ sum y_i - R d ].
class DrawSet {
  public:
    DrawSet(const DataMatrix& x, StatisticKind statistic, std::size_t rn, std::size_t L,
            const StreamId& stream);

    double statistic(std::size_t l, const Vector& mu) const;
    // Fraction of draw sets with statistic(l, mu) <= asymptotic critical value at level.
    double confidence(const Vector& mu, double level_alpha) const;

    std::size_t L() const { return cross_.size(); }
    std::size_t rn() const { return rn_; }

  private:
    StatisticKind statistic_;
    std::size_t rn_;
    std::size_t m_;
    Vector xbar_;
    Matrix sigma_inv_;
    Matrix inv_sqrt_;
    std::vector<double> cross_;  // U-type: sum y_i'A y_j
    std::vector<Vector> sums_;   // sum (y_i + y_j) or sum y_i
};

/// Randomized confidence function f_L(mu; alpha).
double randomized_confidence_function(const DataMatrix& x, const Vector& mu, double alpha,
                                      StatisticKind statistic, std::size_t rn, std::size_t L,
                                      std::uint64_t seed);

/// Grid points mu with f_L(mu; alpha - beta) >= 1 - alpha, all points scored
/// against the same L draw sets. Scalar data only.
std::vector<double> confidence_region_grid(const DataMatrix& x, double alpha, double beta,
                                           const std::vector<double>& grid,
                                           StatisticKind statistic, std::size_t rn,
                                           std::size_t L, std::uint64_t seed);

}  // namespace drinf
