#include <cmath>
#include <sstream>

#include "doctest.h"
#include "evt/compare.hpp"
#include "evt/report.hpp"
#include "oracles.hpp"

using namespace evt;

TEST_SUITE_BEGIN("compare");

TEST_CASE("amse_factor reference values") {
    CHECK(amse_factor(1.0, 1.0, -0.3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(amse_factor(1.0, 1.0, -2.0) == doctest::Approx(1.0).epsilon(1e-14));
    // rho = -1/2: (BIAS^2)^(1/2) VAR^(1/2)
    CHECK(amse_factor(2.0, -0.7, -0.5) ==
          doctest::Approx(0.7 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(amse_factor(2.0, 0.5, -1.0) ==
          doctest::Approx(std::pow(0.25, 1.0 / 3.0) * std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(amse_factor(1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(amse_factor(1.0, 0.0, -0.5), std::domain_error);
    CHECK_THROWS_AS(amse_factor(-1.0, 1.0, -0.5), std::domain_error);
}

TEST_CASE("k0_factor reference values and homogeneity") {
    CHECK(k0_factor(0.8, 0.8, -0.4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(k0_factor(1.5, 0.3, -0.5) == doctest::Approx(5.0).epsilon(1e-14));
    oracle::Uniform u(5);
    for (int rep = 0; rep < 30; ++rep) {
        const double v = u(0.1, 5.0), b = u(-3.0, 3.0), r = u(-1.0, -0.05);
        if (b == 0.0) continue;
        CHECK(k0_factor(2.0 * v, b, r) ==
              doctest::Approx(std::pow(4.0, 1.0 / (1.0 - 2.0 * r)) * k0_factor(v, b, r))
                  .epsilon(1e-12));
    }
}

TEST_CASE("amse_factor scale consistency") {
    oracle::Uniform u(6);
    for (int rep = 0; rep < 30; ++rep) {
        const double v = u(0.1, 5.0), b = u(0.05, 3.0), r = u(-1.0, -0.05), c = u(0.1, 4.0);
        CHECK(amse_factor(c * c * v, c * b, r) ==
              doctest::Approx(c * c * amse_factor(v, b, r)).epsilon(1e-12));
    }
}

TEST_CASE("equal kinds give unit ratios") {
    const ComparisonGrid g =
        build_grid(EstimatorKind::pot_mle, EstimatorKind::pot_mle, {-0.3, 0.3}, {-1.0, -0.1},
                   {5, 4});
    for (const GridCell& c : g.cells) {
        CHECK(c.amse_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.k0_ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("swapping kinds inverts the ratios") {
    const ComparisonGrid ab = build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle,
                                         {-0.3, 0.3}, {-1.0, -0.1}, {4, 4});
    const ComparisonGrid ba = build_grid(EstimatorKind::bm_mle, EstimatorKind::pot_mle,
                                         {-0.3, 0.3}, {-1.0, -0.1}, {4, 4});
    for (std::size_t i = 0; i < ab.cells.size(); ++i) {
        CHECK(ab.cells[i].amse_ratio * ba.cells[i].amse_ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ab.cells[i].k0_ratio * ba.cells[i].k0_ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("ratios are independent of the bias scale lambda") {
    const ComparisonGrid g = build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle,
                                        {-0.2, 0.2}, {-0.8, -0.2}, {3, 3});
    for (const GridCell& c : g.cells) {
        const double lam = 2.0;
        const double ratio2 = amse_factor(c.var_a, lam * c.bias_a, c.rho) /
                              amse_factor(c.var_b, lam * c.bias_b, c.rho);
        CHECK(ratio2 == doctest::Approx(c.amse_ratio).epsilon(1e-12));
    }
}

TEST_CASE("one-cell grid equals the hand-composed quantities") {
    const SecondOrderSpec spec{0.2, -0.5, 1.0};
    const AsymMoments a = estimator_asym(EstimatorKind::pot_mle, spec);
    const AsymMoments b = estimator_asym(EstimatorKind::bm_mle, spec);
    const ComparisonGrid g = build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle,
                                        {0.2, 0.2}, {-0.5, -0.5}, {1, 1});
    REQUIRE(g.cells.size() == 1);
    const GridCell& c = g.cells.front();
    CHECK(c.var_a == doctest::Approx(a.variance).epsilon(1e-12));
    CHECK(c.bias_b == doctest::Approx(b.bias).epsilon(1e-12));
    CHECK(c.amse_ratio == doctest::Approx(amse_factor(a.variance, a.bias, -0.5) /
                                          amse_factor(b.variance, b.bias, -0.5))
                              .epsilon(1e-12));
    CHECK(c.k0_ratio == doctest::Approx(k0_factor(a.variance, a.bias, -0.5) /
                                        k0_factor(b.variance, b.bias, -0.5))
                            .epsilon(1e-12));
}

TEST_CASE("BM-MLE variance dominates BM-PWM across the overlap window") {
    const ComparisonGrid g = build_grid(EstimatorKind::bm_mle, EstimatorKind::bm_pwm,
                                        {-0.44, 0.44}, {-0.5, -0.5}, {23, 1});
    for (const GridCell& c : g.cells) CHECK(c.var_a / c.var_b < 1.0);
}

TEST_CASE("rho = 0 cells carry markers, not numbers") {
    const ComparisonGrid g = build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle,
                                        {0.1, 0.1}, {-0.2, 0.0}, {1, 3});
    const GridCell& edge = g.cells.back();
    CHECK(edge.rho == 0.0);
    CHECK((edge.flags & kFlagRhoZero) != 0);
    CHECK(std::isnan(edge.amse_ratio));
    CHECK(std::isnan(edge.k0_ratio));
    CHECK(std::isfinite(edge.var_a));
    CHECK(std::isfinite(edge.bias_a));
    // interior cells are plain numbers
    CHECK(g.cells.front().flags == 0);
    CHECK(std::isfinite(g.cells.front().amse_ratio));
}

TEST_CASE("grid rejects invalid ranges") {
    CHECK_THROWS_AS(build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle, {0.3, -0.3},
                               {-1.0, -0.1}, {3, 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle, {-0.3, 0.3},
                               {-1.0, 0.5}, {3, 3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle, {-0.3, 0.3},
                               {-1.0, -0.1}, {0, 3}),
                    std::invalid_argument);
}

TEST_CASE("grid CSV format") {
    const ComparisonGrid g = build_grid(EstimatorKind::pot_mle, EstimatorKind::bm_mle,
                                        {0.0, 0.1}, {-0.5, 0.0}, {2, 2});
    std::ostringstream os;
    write_grid_csv(g, os);
    const std::string text = os.str();
    CHECK(text.rfind("gamma,rho,var_a,var_b,bias_a,bias_b,amse_ratio,k0_ratio,flags\n", 0) == 0);
    CHECK(text.find("\r") == std::string::npos);  // LF endings only
    CHECK(text.find("rho_zero") != std::string::npos);
    // shortest round-trip float formatting
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.05) == "-0.05");
    CHECK(format_double(1.0) == "1");
    const double v = g.cells.front().var_a;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("default grid covers the plotting window") {
    const ComparisonGrid g = build_default_grid(EstimatorKind::pot_pwm, EstimatorKind::bm_pwm);
    CHECK(g.gamma_values.size() == 91);
    CHECK(g.rho_values.size() == 20);
    CHECK(g.gamma_values.front() == doctest::Approx(-0.45));
    CHECK(g.gamma_values.back() == doctest::Approx(0.45));
    CHECK(g.rho_values.front() == doctest::Approx(-1.0));
    CHECK(g.rho_values.back() == doctest::Approx(-0.05));
}

TEST_SUITE_END();
