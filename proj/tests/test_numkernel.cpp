#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "drinf/numkernel.hpp"
#include "drinf/rng.hpp"
#include "support.hpp"

using namespace drinf;

TEST_CASE("DataMatrix validates shape and finiteness") {
    CHECK_THROWS_AS(DataMatrix(Matrix::Zero(1, 2)), BadSize);
    CHECK_THROWS_AS(DataMatrix(Matrix::Zero(3, 0)), BadSize);
    Matrix bad = Matrix::Zero(3, 1);
    bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(DataMatrix{bad}, DomainError);
    bad(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(DataMatrix{bad}, DomainError);
}

TEST_CASE("sample_mean") {
    CHECK(num::sample_mean(DataMatrix((Matrix(2, 1) << -1, 1).finished()))[0] == 0.0);
    const Vector m = num::sample_mean(DataMatrix((Matrix(2, 2) << 1, 2, 3, 4).finished()));
    CHECK(m[0] == 2.0);
    CHECK(m[1] == 3.0);
}

TEST_CASE("sample_covariance uses divisor n") {
    const auto cov = num::sample_covariance(DataMatrix((Matrix(2, 1) << 0, 2).finished()));
    CHECK(cov.sigma_hat(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cov.inv_sqrt(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("constant column is singular") {
    CHECK_THROWS_AS(num::sample_covariance(DataMatrix((Matrix(2, 2) << -1, 0, 1, 0).finished())),
                    SingularCovariance);
    // Non-zero constant: the computed variance may be a rounding residue.
    Matrix x(5, 2);
    x << 0.1, 0.7, 0.2, 0.7, 0.3, 0.7, 0.4, 0.7, 0.5, 0.7;
    CHECK_THROWS_AS(num::sample_covariance(DataMatrix(x)), SingularCovariance);
}

TEST_CASE("sample_covariance is PSD and scales quadratically") {
    Philox rng(stream_for(3, 0, Purpose::data));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto x = testing_support::gaussian_data(30, 3, seed);
        const auto cov = num::sample_covariance(x);
        for (int v = 0; v < 100; ++v) {
            Vector u(3);
            for (int k = 0; k < 3; ++k) u[k] = rng.normal();
            CHECK(u.dot(cov.sigma_hat * u) >= -1e-12);
        }
        const double c = 2.5;
        const auto scaled = num::sample_covariance(DataMatrix(c * x.values()));
        CHECK((scaled.sigma_hat - c * c * cov.sigma_hat).cwiseAbs().maxCoeff() <=
              1e-10 * cov.sigma_hat.cwiseAbs().maxCoeff() * c * c);
    }
}

TEST_CASE("inv_sqrt_psd") {
    CHECK(num::inv_sqrt_psd(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-14));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 4;
    d(1, 1) = 9;
    const Matrix r = num::inv_sqrt_psd(d);
    CHECK(r(0, 0) == doctest::Approx(0.5));
    CHECK(r(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(r(0, 1)) < 1e-15);

    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1;
    CHECK_THROWS_AS(num::inv_sqrt_psd(singular), SingularCovariance);

    Philox rng(stream_for(11, 0, Purpose::data));
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + trial % 5;
        Matrix a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
        const Matrix psd = a * a.transpose() + Matrix::Identity(m, m);
        const Matrix s = num::inv_sqrt_psd(psd);
        CHECK(((s * s) * psd - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("quantile examples") {
    const auto z = num::Distribution::std_normal();
    CHECK(num::dist_quantile(z, 0.5) == doctest::Approx(0.0));
    CHECK(std::abs(num::dist_quantile(z, 0.975) - 1.95996) < 1e-4);
    const double q = num::dist_quantile(num::Distribution::chi_square(1), 0.95);
    CHECK(std::abs(q - 3.84146) < 1e-4);
    const double zq = num::normal_quantile(0.975);
    CHECK(q == doctest::Approx(zq * zq).epsilon(1e-10));
}

TEST_CASE("quantile domain") {
    const auto z = num::Distribution::std_normal();
    CHECK_THROWS_AS(num::dist_quantile(z, 0.0), DomainError);
    CHECK_THROWS_AS(num::dist_quantile(z, 1.0), DomainError);
    CHECK_THROWS_AS(num::dist_quantile(z, -0.1), DomainError);
    CHECK_THROWS_AS(num::Distribution::chi_square(0.5), DomainError);
}

TEST_CASE("cdf and quantile agree with Boost") {
    boost::math::normal_distribution<double> bn;
    for (double p = 1e-12; p < 1.0; p = (p < 0.01 ? p * 10 : p + 0.01)) {
        const double b = boost::math::quantile(bn, p);
        CHECK(num::normal_quantile(p) == doctest::Approx(b).epsilon(1e-12));
    }
    for (double x = -30; x <= 8; x += 0.37) {
        const double b = boost::math::cdf(bn, x);
        CHECK(num::normal_cdf(x) == doctest::Approx(b).epsilon(1e-12));
    }
    for (double df : {1.0, 2.0, 3.0, 5.0, 10.0, 37.0, 200.0}) {
        boost::math::chi_squared_distribution<double> bc(df);
        const auto c = num::Distribution::chi_square(df);
        for (double p = 0.001; p < 1.0; p += 0.0237) {
            CHECK(num::dist_quantile(c, p) ==
                  doctest::Approx(boost::math::quantile(bc, p)).epsilon(1e-10));
        }
        for (double x = 0.01; x < 4 * df + 20; x *= 1.7) {
            CHECK(num::dist_cdf(c, x) == doctest::Approx(boost::math::cdf(bc, x)).epsilon(1e-12));
            const double sf = boost::math::cdf(boost::math::complement(bc, x));
            CHECK(num::dist_sf(c, x) == doctest::Approx(sf).epsilon(1e-10));
        }
    }
    for (double a : {0.5, 1.0, 2.5, 20.0}) {
        for (double x : {0.1, 1.0, 3.0, 30.0}) {
            CHECK(num::gamma_p(a, x) == doctest::Approx(boost::math::gamma_p(a, x)).epsilon(1e-12));
            CHECK(num::gamma_q(a, x) == doctest::Approx(boost::math::gamma_q(a, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("cdf inverts quantile on a grid") {
    const auto dists = {num::Distribution::std_normal(), num::Distribution::chi_square(1),
                        num::Distribution::chi_square(2), num::Distribution::chi_square(7)};
    for (const auto& d : dists) {
        for (int i = 1; i <= 99; ++i) {
            const double p = i / 100.0;
            CHECK(std::abs(num::dist_cdf(d, num::dist_quantile(d, p)) - p) < 1e-8);
        }
    }
}
