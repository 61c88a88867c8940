#include "drinf/numkernel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace drinf {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 2) {
        throw BadSize("data matrix needs at least 2 rows, got " + std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) {
        throw BadSize("data matrix needs at least 1 column");
    }
    if (!values_.allFinite()) {
        throw DomainError("data matrix contains non-finite entries");
    }
}

DataMatrix DataMatrix::column(const Vector& x) {
    return DataMatrix(Matrix(x));
}

bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.n() == b.n() && a.m() == b.m() && a.values_ == b.values_;
}

namespace num {

Vector sample_mean(const DataMatrix& x) {
    return x.values().colwise().mean().transpose();
}

double default_eigen_floor(const Matrix& m) {
    return 1e-10 * m.trace() / static_cast<double>(m.rows());
}

double data_scale_floor(const DataMatrix& x) {
    const double scale = 64.0 * std::numeric_limits<double>::epsilon() *
                         x.values().cwiseAbs().maxCoeff();
    return scale * scale;
}

Matrix inv_sqrt_psd(const Matrix& m, double floor) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    if (eig.info() != Eigen::Success) {
        throw SingularCovariance("eigendecomposition failed");
    }
    const Vector& lambda = eig.eigenvalues();
    if (lambda.minCoeff() <= floor) {
        throw SingularCovariance("matrix is numerically singular (min eigenvalue " +
                                 std::to_string(lambda.minCoeff()) + ")");
    }
    const Matrix& v = eig.eigenvectors();
    return v * lambda.array().rsqrt().matrix().asDiagonal() * v.transpose();
}

Matrix inv_sqrt_psd(const Matrix& m) {
    return inv_sqrt_psd(m, default_eigen_floor(m));
}

CovarianceEstimate sample_covariance(const DataMatrix& x) {
    const Matrix centered = x.values().rowwise() - x.values().colwise().mean();
    Matrix sigma = (centered.transpose() * centered) / static_cast<double>(x.n());
    // Symmetrize exactly; the product is symmetric up to rounding only.
    sigma = 0.5 * (sigma + sigma.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
    CovarianceEstimate out;
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.inv_sqrt =
        inv_sqrt_psd(sigma, std::max(default_eigen_floor(sigma), data_scale_floor(x)));
    out.sigma_hat = std::move(sigma);
    return out;
}

// ---------------------------------------------------------------------------
// Distributions

Distribution Distribution::chi_square(double df) {
    if (!(df >= 1.0)) {
        throw DomainError("chi-square degrees of freedom must be >= 1");
    }
    return {Kind::chi_square, df};
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

double normal_sf(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// Acklam's rational approximation (relative error ~1e-9) for the lower half,
// polished by one Halley step against erfc.
double normal_quantile_lower(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

void check_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("probability must lie in (0,1), got " + std::to_string(p));
    }
}

double log_chi_square_density(double df, double x) {
    const double k = 0.5 * df;
    return (k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k);
}

double chi_square_quantile(double df, double p) {
    const bool lower = p <= 0.5;
    const double target = lower ? p : 1.0 - p;
    auto residual = [&](double x) {
        return lower ? gamma_p(0.5 * df, 0.5 * x) - target : gamma_q(0.5 * df, 0.5 * x) - target;
    };

    // Wilson-Hilferty start.
    const double z = normal_quantile(p);
    const double h = 2.0 / (9.0 * df);
    double x = df * std::pow(std::max(1.0 - h + z * std::sqrt(h), 0.05), 3);

    double lo = 0.0;
    double hi = std::max(2.0 * x, df + 10.0);
    // residual is increasing in x for the lower form, decreasing for the upper form
    auto below = [&](double r) { return lower ? r < 0.0 : r > 0.0; };
    while (below(residual(hi))) {
        lo = hi;
        hi *= 2.0;
    }

    for (int iter = 0; iter < 200; ++iter) {
        const double r = residual(x);
        if (r == 0.0) {
            return x;
        }
        if (below(r)) {
            lo = x;
        } else {
            hi = x;
        }
        const double dens = std::exp(log_chi_square_density(df, x));
        double step = lower ? r / dens : -r / dens;
        double next = x - step;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
            return next;
        }
        x = next;
    }
    return x;
}

}  // namespace

double normal_quantile(double p) {
    check_probability(p);
    if (p == 0.5) {
        return 0.0;
    }
    return p < 0.5 ? normal_quantile_lower(p) : -normal_quantile_lower(1.0 - p);
}

double gamma_p(double a, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= a + 1.0) {
        return 1.0 - gamma_q(a, x);
    }
    // Power series.
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return 1.0 - gamma_p(a, x);
    }
    // Modified Lentz continued fraction.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double dist_cdf(const Distribution& d, double x) {
    switch (d.kind) {
        case Distribution::Kind::std_normal:
            return normal_cdf(x);
        case Distribution::Kind::chi_square:
            return gamma_p(0.5 * d.df, 0.5 * x);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double dist_sf(const Distribution& d, double x) {
    switch (d.kind) {
        case Distribution::Kind::std_normal:
            return normal_sf(x);
        case Distribution::Kind::chi_square:
            return gamma_q(0.5 * d.df, 0.5 * x);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double dist_quantile(const Distribution& d, double p) {
    check_probability(p);
    switch (d.kind) {
        case Distribution::Kind::std_normal:
            return normal_quantile(p);
        case Distribution::Kind::chi_square:
            return chi_square_quantile(d.df, p);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace num
}  // namespace drinf
