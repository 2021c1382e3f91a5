#include <cmath>

#include "doctest.h"
#include "evt/gpd.hpp"
#include "evt/numerics.hpp"
#include "oracles.hpp"

using namespace evt;

TEST_SUITE_BEGIN("gpd");

TEST_CASE("gpd_loglik reference values and support") {
    CHECK(gpd_loglik({0.0, 1.0}, 0.0) == doctest::Approx(0.0));
    CHECK(gpd_loglik({1.0, 1.0}, 1.0) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(gpd_loglik({0.5, 2.0}, -1.0) == -std::numeric_limits<double>::infinity());
    // beyond the right endpoint sigma/|gamma|
    CHECK(gpd_loglik({-0.5, 1.0}, 2.5) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(gpd_loglik({0.1, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("gpd_cdf and gpd_quantile are mutually inverse") {
    for (double y : {0.1, 0.5, 2.0, 7.0})
        CHECK(gpd_cdf({0.0, 1.0}, y) == doctest::Approx(-std::expm1(-y)).epsilon(1e-14));
    CHECK(gpd_cdf({-0.5, 1.0}, 2.0) == doctest::Approx(1.0));
    CHECK(gpd_cdf({-0.5, 1.0}, 5.0) == 1.0);
    oracle::Uniform u(9);
    for (int rep = 0; rep < 200; ++rep) {
        const GpdParams p{u(-0.45, 1.5), u(0.2, 4.0)};
        const double s = u(0.001, 0.999);
        CHECK(gpd_cdf(p, gpd_quantile(p, s)) == doctest::Approx(s).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gpd_quantile({0.1, 1.0}, 1.0), std::domain_error);
}

TEST_CASE("gpd density integrates to one") {
    QuadratureSpec spec;
    spec.abs_tol = 1e-11;
    spec.rel_tol = 1e-11;
    spec.max_subdivisions = 10000;
    for (double g : {-0.4, 0.0, 0.5, 1.0}) {
        const GpdParams p{g, 1.3};
        double total;
        if (g < 0.0) {
            total = integrate([&](double y) { return gpd_pdf(p, y); }, 0.0, p.sigma / -g, spec);
        } else {
            total = integrate(
                [&](double t) {
                    const double y = t / (1.0 - t);
                    return gpd_pdf(p, y) / ((1.0 - t) * (1.0 - t));
                },
                0.0, 1.0, spec);
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("gpd score and hessian match finite differences") {
    oracle::Uniform u(19);
    for (int rep = 0; rep < 300; ++rep) {
        const GpdParams p{u(-0.45, 1.5), u(0.2, 4.0)};
        const double y = gpd_quantile(p, u(0.03, 0.97));
        const auto s = gpd_score(p, y);
        const double dg =
            oracle::deriv([&](double g) { return gpd_loglik({g, p.sigma}, y); }, p.gamma, 1e-6);
        const double ds = oracle::deriv([&](double sg) { return gpd_loglik({p.gamma, sg}, y); },
                                        p.sigma, 1e-6 * p.sigma);
        CHECK(oracle::rel_err(s[0], dg) <= 1e-6);
        CHECK(oracle::rel_err(s[1], ds) <= 1e-6);

        const auto h = gpd_hessian(p, y);
        const double hgg =
            oracle::deriv([&](double g) { return gpd_score({g, p.sigma}, y)[0]; }, p.gamma, 1e-6);
        const double hgs = oracle::deriv([&](double sg) { return gpd_score({p.gamma, sg}, y)[0]; },
                                         p.sigma, 1e-6 * p.sigma);
        const double hss = oracle::deriv([&](double sg) { return gpd_score({p.gamma, sg}, y)[1]; },
                                         p.sigma, 1e-6 * p.sigma);
        CHECK(oracle::rel_err(h[0], hgg) <= 1e-5);
        CHECK(oracle::rel_err(h[1], hgs) <= 1e-5);
        CHECK(oracle::rel_err(h[2], hss) <= 1e-5);
    }
}

TEST_CASE("gamma continuity at 0") {
    for (double y : {0.1, 0.7, 3.0}) {
        for (double g : {1e-9, -1e-9}) {
            CHECK(oracle::rel_err(gpd_loglik({g, 1.0}, y), gpd_loglik({0.0, 1.0}, y)) <= 1e-5);
            const auto s1 = gpd_score({g, 1.0}, y), s0 = gpd_score({0.0, 1.0}, y);
            CHECK(oracle::rel_err(s1[0], s0[0]) <= 1e-5);
            CHECK(oracle::rel_err(s1[1], s0[1]) <= 1e-5);
        }
    }
}

TEST_SUITE_END();
