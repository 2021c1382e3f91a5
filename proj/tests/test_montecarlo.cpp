#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "evt/detail/stable.hpp"
#include "evt/estimators.hpp"
#include "evt/montecarlo.hpp"
#include "evt/report.hpp"
#include "evt/rng.hpp"

using namespace evt;

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("counter rng: determinism and stream separation") {
    CounterRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    bool all_equal_c = true, all_equal_d = true;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) all_equal_c = false;
        if (va != d.next_u64()) all_equal_d = false;
    }
    CHECK_FALSE(all_equal_c);
    CHECK_FALSE(all_equal_d);
    CounterRng u(7, 3);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform_open01();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("sample_exact_gev: seeded reproducibility") {
    const auto a = sample_exact_gev(0.25, 10, 42, 0);
    const auto b = sample_exact_gev(0.25, 10, 42, 0);
    CHECK(a.maxima == b.maxima);
    const auto c = sample_exact_gev(0.25, 10, 43, 0);
    CHECK(a.maxima != c.maxima);
}

TEST_CASE("sample_exact_gev: Kolmogorov distance to the model cdf") {
    for (double g0 : {0.25, -0.3}) {
        const auto s = sample_exact_gev(g0, 100000, 4242, 0);
        double sup = 0.0;
        const double n = static_cast<double>(s.sorted_maxima.size());
        for (std::size_t i = 0; i < s.sorted_maxima.size(); ++i) {
            const double f = cdf({g0, 0.0, 1.0}, s.sorted_maxima[i]);
            sup = std::max(sup, std::abs(f - (i + 1) / n));
            sup = std::max(sup, std::abs(f - i / n));
        }
        CHECK(sup < 0.006);  // 1% Kolmogorov band at n = 1e5
    }
}

TEST_CASE("gumbel draws have the right median") {
    const auto s = sample_exact_gev(0.0, 100000, 99, 0);
    const double med = s.sorted_maxima[s.sorted_maxima.size() / 2];
    CHECK(std::abs(med - (-std::log(std::log(2.0)))) <= 0.02);
}

TEST_CASE("block maxima of unit Frechet match the stability property") {
    // mean of log(max/m) over blocks of m equals the Gumbel mean (Euler's constant)
    const auto dist = frechet_dist();
    const auto s = sample_domain_of_attraction(dist, 20000, 50, 7, 0, /*use_shortcut=*/false);
    double mean = 0.0;
    for (double v : s.maxima) mean += std::log(v / 50.0);
    mean /= s.maxima.size();
    const double se = (M_PI / std::sqrt(6.0)) / std::sqrt(20000.0);
    CHECK(std::abs(mean - euler_gamma) <= 4.0 * se);
}

TEST_CASE("m = 1 brute force reduces to raw sampling and matches the shortcut") {
    const auto dist = exact_gev_dist(0.3);
    const auto brute = sample_domain_of_attraction(dist, 50, 1, 5, 2, false);
    const auto quick = sample_domain_of_attraction(dist, 50, 1, 5, 2, true);
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(brute.maxima[i] == doctest::Approx(quick.maxima[i]).epsilon(1e-12));
}

TEST_CASE("brute-force and shortcut block maxima agree in distribution") {
    const auto dist = hall_dist(0.25, -1.0, -4.0);
    const std::size_t k = 20000, m = 60;
    const auto brute = sample_domain_of_attraction(dist, k, m, 11, 0, false);
    const auto quick = sample_domain_of_attraction(dist, k, m, 12, 0, true);
    // two-sample Kolmogorov-Smirnov at the 0.1% level
    double sup = 0.0;
    std::size_t i = 0, j = 0;
    while (i < k && j < k) {
        if (brute.sorted_maxima[i] <= quick.sorted_maxima[j]) ++i;
        else ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) - static_cast<double>(j)) / k);
    }
    CHECK(sup <= 1.95 * std::sqrt(2.0 / k));
}

TEST_CASE("hall catalog: derived constants satisfy the second-order display") {
    for (auto [g, r, d] : {std::tuple{0.25, -1.0, -4.0}, std::tuple{0.25, -0.5, -1.0},
                           std::tuple{-0.2, -1.0, -2.0}}) {
        const auto dist = hall_dist(g, r, d);
        const double m = 1e8;
        const double am = dist.a_fn(m), bm = dist.b_fn(m), rate = dist.A_fn(m);
        // the remainder of the second-order display is exactly one order of
        // A(m) smaller: |lhs - rhs| = |A H| |d| m^rho / (1 + d m^rho)
        const double rem_scale = std::abs(rate) * std::abs(d) * std::pow(m, r);
        for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double hh = h_second_order(g, r, x);
            const double lhs = (dist.b_fn(m * x) - bm) / am;
            const double rhs = detail::powm1_over(x, g) + rate * hh;
            CHECK(std::abs(lhs - rhs) <= 3.0 * rem_scale * std::max(1.0, std::abs(hh)) + 1e-12);
        }
    }
    CHECK_THROWS_AS(hall_dist(0.25, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("run_study: reproducible and thread-count independent") {
    McConfig cfg;
    cfg.replications = 60;
    cfg.num_blocks = 200;
    cfg.seed = 4242;
    cfg.parallelism = 1;
    const McSummary s1 = run_study(exact_gev_dist(0.25), cfg, EstimatorKind::bm_mle);
    cfg.parallelism = 4;
    const McSummary s4 = run_study(exact_gev_dist(0.25), cfg, EstimatorKind::bm_mle);
    CHECK(mc_summary_json(s1) == mc_summary_json(s4));
    for (int i = 0; i < 3; ++i) CHECK(s1.mean[i] == s4.mean[i]);
}

TEST_CASE("run_study: single replication reports unusable standard errors") {
    McConfig cfg;
    cfg.replications = 1;
    cfg.num_blocks = 200;
    cfg.seed = 9;
    const McSummary s = run_study(exact_gev_dist(0.1), cfg, EstimatorKind::bm_mle);
    CHECK(s.n_converged == 1);
    for (double v : s.mc_se) CHECK(std::isnan(v));
    for (double v : s.mean) CHECK(std::isfinite(v));
}

TEST_CASE("run_study: estimator / sampling-model mismatches are rejected") {
    McConfig cfg;
    cfg.replications = 2;
    cfg.num_blocks = 50;
    CHECK_THROWS_AS(run_study(exact_gev_dist(0.25), cfg, EstimatorKind::pot_mle),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_study(exact_gpd_dist(0.25), cfg, EstimatorKind::bm_mle),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_study(exact_gev_dist(0.8), cfg, EstimatorKind::bm_pwm),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_catalog_dist("weibull", 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("normalized covariance approaches the inverse information as R grows") {
    auto frob_dist = [](const McSummary& s) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                num += (s.cov[i][j] - s.target_cov[i][j]) * (s.cov[i][j] - s.target_cov[i][j]);
                den += s.target_cov[i][j] * s.target_cov[i][j];
            }
        return std::sqrt(num / den);
    };
    McConfig cfg;
    cfg.num_blocks = 1000;
    cfg.seed = 31;
    cfg.parallelism = 4;
    cfg.replications = 500;
    const double d500 = frob_dist(run_study(exact_gev_dist(0.25), cfg, EstimatorKind::bm_mle));
    cfg.replications = 2000;
    const double d2000 = frob_dist(run_study(exact_gev_dist(0.25), cfg, EstimatorKind::bm_mle));
    CHECK(d2000 < d500);
}

TEST_CASE("registry variances within Monte Carlo bands at gamma = 0.2") {
    McConfig cfg;
    cfg.replications = 800;
    cfg.num_blocks = 2000;
    cfg.seed = 2020;
    cfg.parallelism = 4;
    struct Row {
        EstimatorKind kind;
        TestDistribution dist;
    };
    for (const Row& row : {Row{EstimatorKind::bm_pwm, exact_gev_dist(0.2)},
                           Row{EstimatorKind::pot_mle, exact_gpd_dist(0.2)},
                           Row{EstimatorKind::pot_pwm, exact_gpd_dist(0.2)}}) {
        const McSummary s = run_study(row.dist, cfg, row.kind);
        CHECK(s.convergence_rate >= 0.99);
        CHECK(std::abs(s.cov[0][0] - s.target_cov[0][0]) <= 0.12 * s.target_cov[0][0]);
        // exact-model data carries no limit bias
        CHECK(s.target_mean[0] == 0.0);
        CHECK(std::abs(s.mean[0]) <= 4.0 * s.mc_se[0]);
    }
}

TEST_CASE("second-order bias law reproduced for both MLE and PWM under block maxima") {
    const auto dist = hall_dist(0.25, -1.0, -4.0);
    McConfig cfg;
    cfg.replications = 800;
    cfg.num_blocks = 1000;
    cfg.block_size = 100;
    cfg.seed = 77;
    cfg.parallelism = 4;
    for (auto kind : {EstimatorKind::bm_mle, EstimatorKind::bm_pwm}) {
        const McSummary s = run_study(dist, cfg, kind);
        CHECK(s.lambda_hat == doctest::Approx(std::sqrt(1000.0) * 0.04).epsilon(1e-12));
        const double tol = std::max(3.0 * s.mc_se[0], 0.15 * std::abs(s.target_mean[0]));
        CHECK(std::abs(s.mean[0] - s.target_mean[0]) <= tol);
    }
}

TEST_CASE("standardized index errors pass a normality test") {
    // the limit law is Gaussian in shape, not just in mean and variance
    const std::size_t k = 1000;
    const int reps = 1200;
    std::vector<double> errs;
    for (int rep = 0; rep < reps; ++rep) {
        const GevFit fit = fit_bm_mle(sample_exact_gev(0.25, k, 777, rep));
        if (fit.diag.converged) errs.push_back(fit.params.gamma - 0.25);
    }
    REQUIRE(errs.size() >= 0.99 * reps);
    double mean = 0.0, var = 0.0;
    for (double e : errs) mean += e;
    mean /= errs.size();
    for (double e : errs) var += (e - mean) * (e - mean);
    var /= (errs.size() - 1.0);
    std::sort(errs.begin(), errs.end());
    double sup = 0.0;
    for (std::size_t i = 0; i < errs.size(); ++i) {
        const double z = (errs[i] - mean) / std::sqrt(var);
        const double f = 0.5 * std::erfc(-z / std::sqrt(2.0));
        sup = std::max(sup, std::abs(f - (i + 1.0) / errs.size()));
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / errs.size()));
    }
    CHECK(sup <= 1.628 / std::sqrt(static_cast<double>(errs.size())));  // 1% level
}

TEST_CASE("PWM moment covariance against simulation") {
    // covariance of sqrt(k) (b_r - beta_r) on exact GEV(0.2) data
    const double g0 = 0.2;
    const std::size_t k = 4000;
    const int reps = 2000;
    const auto sig = registry::bm_pwm_moment_cov(g0);
    const double gfact = gamma_fn(1.0 - g0);
    double beta[3];
    for (int r = 0; r < 3; ++r)
        beta[r] = (1.0 - gfact * std::pow(r + 1.0, g0)) / (-g0 * (r + 1.0));
    double mean[3] = {}, cov[6] = {};
    std::vector<std::array<double, 3>> errs(reps);
    for (int rep = 0; rep < reps; ++rep) {
        const auto s = sample_exact_gev(g0, k, 555, rep);
        const auto b = detail::sample_pwm<3>(s.sorted_maxima);
        for (int r = 0; r < 3; ++r) errs[rep][r] = std::sqrt(double(k)) * (b[r] - beta[r]);
        for (int r = 0; r < 3; ++r) mean[r] += errs[rep][r];
    }
    for (double& m : mean) m /= reps;
    for (int rep = 0; rep < reps; ++rep) {
        int idx = 0;
        for (int r = 0; r < 3; ++r)
            for (int s2 = r; s2 < 3; ++s2, ++idx)
                cov[idx] += (errs[rep][r] - mean[r]) * (errs[rep][s2] - mean[s2]);
    }
    for (double& c : cov) c /= (reps - 1);
    for (int idx = 0; idx < 6; ++idx)
        CHECK(std::abs(cov[idx] - sig[idx]) <= 0.15 * std::max(0.05, std::abs(sig[idx])));
}

TEST_SUITE_END();
