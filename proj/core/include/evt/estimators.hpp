#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>

#include "evt/gev.hpp"
#include "evt/gpd.hpp"
#include "evt/numerics.hpp"
#include "evt/sampling.hpp"

namespace evt {

struct SolverConfig {
    double tol_score = 1e-8;  // on the dimensionless per-observation score
    int max_iter = 100;
    enum class LineSearch { halving, none };
    LineSearch line_search = LineSearch::halving;
    std::optional<GevParams> init;  // default: PWM seeding with a profile-grid fallback
};

struct FitDiagnostics {
    bool converged = false;
    int iterations = 0;
    double final_score_norm = std::numeric_limits<double>::quiet_NaN();
    bool neg_definite = false;
    // Estimate outside the estimator's asymptotic-normality range
    // (gamma <= -1/2 for MLE, gamma >= 1/2 for PWM). Informational only.
    bool out_of_theory = false;
    std::string message;
};

struct GevFit {
    GevParams params;
    FitDiagnostics diag;
    SymMatrix3 observed_hessian;  // sum over observations, natural parameters
    Vec3 std_errors{std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()};
};

struct GpdFit {
    GpdParams params;
    FitDiagnostics diag;
    std::array<double, 3> observed_hessian{};  // (gg, gs, ss) sums
    std::array<double, 2> std_errors{std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN()};
};

// Newton-Raphson on the GEV score equations in (gamma, mu, log sigma), with
// support-preserving step halving and a steepest-ascent fallback whenever the
// observed Hessian is not negative definite. Requires k >= 10.
GevFit fit_bm_mle(const BlockMaximaSample& sample, const SolverConfig& config = {});

// GEV probability weighted moments: unbiased sample PWMs, the shape from the
// exact (3^g-1)/(2^g-1) moment-ratio equation by safeguarded root finding.
// Requires k >= 4.
GevFit fit_bm_pwm(const BlockMaximaSample& sample);

// GPD maximum likelihood for positive excesses, same solver structure in
// (gamma, log sigma). Requires k >= 10.
GpdFit fit_pot_mle(const ExcessSample& sample, const SolverConfig& config = {});

// GPD probability weighted moments (Hosking-Wallis relations). Requires k >= 2.
GpdFit fit_pot_pwm(const ExcessSample& sample);

namespace detail {
// Unbiased order-statistic PWMs b_0..b_{R-1} with weights falling from the top.
template <int R>
std::array<double, R> sample_pwm(const std::vector<double>& sorted);
// Sum log-likelihood / score / hessian over a GEV sample; false if any point
// is outside the support.
bool gev_sample_score(const GevParams& theta, const std::vector<double>& xs, double* loglik_out,
                      Vec3* score_out, SymMatrix3* hess_out);
}  // namespace detail

}  // namespace evt
