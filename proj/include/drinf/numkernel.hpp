#pragma once

#include <Eigen/Dense>

#include "drinf/error.hpp"

namespace drinf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// n x m block of identically distributed observations, one unit per row.
///
/// Construction validates the shape (n >= 2, m >= 1) and that every entry is
/// finite, so downstream code never re-checks.
class DataMatrix {
  public:
    explicit DataMatrix(Matrix values);

    // Single column convenience.
    static DataMatrix column(const Vector& x);

    Eigen::Index n() const { return values_.rows(); }
    Eigen::Index m() const { return values_.cols(); }
    const Matrix& values() const { return values_; }
    double operator()(Eigen::Index i, Eigen::Index k) const { return values_(i, k); }

    friend bool operator==(const DataMatrix& a, const DataMatrix& b);

  private:
    Matrix values_;
};

struct CovarianceEstimate {
    Matrix sigma_hat;
    Matrix inv_sqrt;
    double min_eigenvalue = 0.0;
};

namespace num {

Vector sample_mean(const DataMatrix& x);

// Divisor is n, not n - 1. The eigenvalue floor is the larger of
// default_eigen_floor(sigma) and data_scale_floor(x).
CovarianceEstimate sample_covariance(const DataMatrix& x);

// Scale-relative eigenvalue floor: 1e-10 * trace(M) / m.
double default_eigen_floor(const Matrix& m);

// Variance level indistinguishable from rounding noise at the data's
// magnitude, (64 eps max|X|)^2. Catches constant columns whose computed
// variance is a tiny positive residue rather than exactly zero.
double data_scale_floor(const DataMatrix& x);

/// Symmetric inverse square root V diag(l^-1/2) V' of a symmetric matrix.
/// Throws SingularCovariance when an eigenvalue is <= floor.
Matrix inv_sqrt_psd(const Matrix& m, double floor);
Matrix inv_sqrt_psd(const Matrix& m);

// Distributions used for critical values and p-values.
struct Distribution {
    enum class Kind { std_normal, chi_square };
    Kind kind = Kind::std_normal;
    double df = 1.0;

    static Distribution std_normal() { return {Kind::std_normal, 1.0}; }
    static Distribution chi_square(double df);
};

double dist_cdf(const Distribution& d, double x);
// Upper tail 1 - cdf, evaluated directly to keep precision for small p-values.
double dist_sf(const Distribution& d, double x);
double dist_quantile(const Distribution& d, double p);

double normal_cdf(double x);
double normal_quantile(double p);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace num
}  // namespace drinf
