#pragma once

#include <string_view>

#include "evt/gev.hpp"
#include "evt/numerics.hpp"

namespace evt {

// Fisher information of the GEV model at (gamma0, 0, 1), in (gamma, mu, sigma) order.
using InfoMatrix = SymMatrix3;

struct BiasVector {
    double b_gamma = 0.0;
    double b_mu = 0.0;
    double b_sigma = 0.0;
    Vec3 as_vec3() const { return {b_gamma, b_mu, b_sigma}; }
};

enum class EstimatorKind { bm_mle, bm_pwm, pot_mle, pot_pwm };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(std::string_view name);

// Both closed forms carry removable singularities at gamma0 = 0 (and the bias
// at gamma0 + rho = 0); inside these neighbourhoods the dispatchers below fall
// back to the quadrature route.
inline constexpr double gamma_info_switch = 1e-3;

// Module default for the improper integrals over (0,1).
QuadratureSpec asym_quadrature();

// Prescott-Walden closed form. Requires gamma0 > -1/2 and |gamma0| >= gamma_info_switch.
InfoMatrix fisher_info_closed(double gamma0);

// Quadrature of -E[hessian] along the quantile function.
InfoMatrix fisher_info_numeric(double gamma0, const QuadratureSpec& spec = asym_quadrature());

// Closed form away from the switch neighbourhoods, numeric inside them.
InfoMatrix fisher_info(double gamma0);

// Closed form of the bias integral; branch selected on rho. Requires
// gamma0 > -1/2, rho <= 0, |gamma0| >= switch and (rho == 0 or |gamma0+rho| >= switch).
BiasVector bias_vector_closed(double gamma0, double rho);

// Quadrature of the defining integral (mixed derivative against the
// second-order limit function along the quantile).
BiasVector bias_vector_numeric(double gamma0, double rho,
                               const QuadratureSpec& spec = asym_quadrature());

BiasVector bias_vector(double gamma0, double rho);

// Asymptotic law of the block-maxima MLE: sqrt(k)-normalized errors are
// Gaussian with covariance I^-1 and mean lambda I^-1 b.
struct MleBmAsym {
    double variance = 0.0;  // gamma component of the covariance
    double bias = 0.0;      // gamma component of the mean
    InfoMatrix full_cov;
    Vec3 full_bias{};
};
MleBmAsym mle_bm_asym(const SecondOrderSpec& spec);

// Per-estimator asymptotic variance and bias of the extreme value index
// estimate (bias scaled by spec.lambda).
struct AsymMoments {
    double variance = 0.0;
    double bias = 0.0;
};
AsymMoments estimator_asym(EstimatorKind kind, const SecondOrderSpec& spec);

// One registry entry per estimator with the provenance of its formulas.
struct FormulaInfo {
    std::string_view name;
    std::string_view provenance;
};
FormulaInfo registry_info(EstimatorKind kind);

namespace registry {

// Variance and unit-lambda bias of the index estimators. MLE entries need
// gamma > -1/2, PWM entries gamma < 1/2; rho <= 0 throughout.
double bm_mle_var(double gamma);
double bm_mle_bias_unit(double gamma, double rho);
double bm_pwm_var(double gamma);
double bm_pwm_bias_unit(double gamma, double rho);
double pot_mle_var(double gamma);
double pot_mle_bias_unit(double gamma, double rho);
double pot_pwm_var(double gamma);
double pot_pwm_bias_unit(double gamma, double rho);

// Covariance of the three GEV probability weighted moment functionals of the
// block-maxima quantile process, packed upper-triangular (00,01,02,11,12,22).
std::array<double, 6> bm_pwm_moment_cov(double gamma);

// GPD counterpart for (a0, a1), packed (00, 01, 11).
std::array<double, 3> pot_pwm_moment_cov(double gamma);

// Quadrature oracles for the POT closed forms (defining integrals).
double pot_mle_bias_numeric(double gamma, double rho);
double pot_pwm_bias_numeric(double gamma, double rho);

}  // namespace registry

namespace detail {
// Fisher information by quadrature of score outer products (information identity).
InfoMatrix fisher_info_score_outer(double gamma0, const QuadratureSpec& spec);
// Integral of the score along the quantile function; zero for a centered score.
Vec3 score_center_integral(double gamma0, const QuadratureSpec& spec);
}  // namespace detail

}  // namespace evt
