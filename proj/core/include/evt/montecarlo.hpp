#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evt/asymptotics.hpp"
#include "evt/sampling.hpp"

namespace evt {

// A sampling model with known first- and second-order behaviour: normalizing
// functions a(m), b(m), rate A(m), and seeded inverse-cdf samplers. When
// blockmax_quantile is set, one draw produces an exact block maximum of size
// m (the F^m shortcut).
struct TestDistribution {
    std::string name;
    double gamma0 = 0.0;
    double rho = 0.0;  // second-order index; irrelevant when A == 0
    std::function<double(double)> a_fn, b_fn, A_fn;
    std::function<double(double)> raw_quantile;                  // u -> X
    std::function<double(double, double)> blockmax_quantile;     // (u, m) -> max of m
    bool excess_model = false;  // k i.i.d. excesses for the POT estimators
};

// Exact GEV(gamma0, 0, 1) observations; block maxima are exact for every m.
TestDistribution exact_gev_dist(double gamma0);

// Hall-class heavy tail: V(t) = (t^g - 1)/g + d (t^(g+rho) - 1)/(g+rho) with
// t clamped below t0 = (-1/d)^(1/rho) for d < 0. Then a(m) = m^g (1 + d m^rho)
// and A(m) = d rho m^rho exactly, up to an O(A^2) remainder.
TestDistribution hall_dist(double gamma0, double rho, double d);

// Unit Frechet: V(t) = t, gamma0 = 1, A == 0.
TestDistribution frechet_dist();

// Exact GPD(gamma0, 1) excesses for validating the POT estimators.
TestDistribution exact_gpd_dist(double gamma0);

// Catalog lookup by name: exact-gev | hall | frechet | exact-gpd.
TestDistribution make_catalog_dist(const std::string& name, double gamma0, double rho);
std::vector<std::string> catalog_names();

struct McConfig {
    int replications = 1;
    std::size_t num_blocks = 0;   // k
    std::size_t block_size = 1;   // m
    std::uint64_t seed = 0;
    int parallelism = 1;
};

// k i.i.d. GEV(gamma0,0,1) variates by quantile transform (block_size 1).
BlockMaximaSample sample_exact_gev(double gamma0, std::size_t k, std::uint64_t seed,
                                   std::uint64_t stream = 0);

// k block maxima of blocks of m draws from dist; uses the exact F^m shortcut
// when available unless use_shortcut is false.
BlockMaximaSample sample_domain_of_attraction(const TestDistribution& dist, std::size_t k,
                                              std::size_t m, std::uint64_t seed,
                                              std::uint64_t stream = 0, bool use_shortcut = true);

struct McSummary {
    std::string dist_name;
    EstimatorKind estimator = EstimatorKind::bm_mle;
    double gamma0 = 0.0;
    double rho = 0.0;
    double lambda_hat = 0.0;  // sqrt(k) A(m)
    std::size_t k = 0, m = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    int n_converged = 0;
    double convergence_rate = 0.0;
    std::vector<std::string> components;  // normalized error labels
    std::vector<double> mean;             // empirical mean of normalized errors
    std::vector<double> mc_se;            // Monte Carlo standard errors of the mean
    std::vector<std::vector<double>> cov;
    std::vector<double> target_mean;              // lambda_hat * I^-1 b (NaN if unknown)
    std::vector<std::vector<double>> target_cov;  // I^-1 (NaN if unknown)
};

// R independent replications: sample, normalize by the true a(m), b(m), fit,
// and accumulate the normalized errors sqrt(k) (gamma-g0, mu/a, sigma/a - 1).
// Deterministic for fixed (dist, config) at any parallelism level.
McSummary run_study(const TestDistribution& dist, const McConfig& config, EstimatorKind kind);

}  // namespace evt
