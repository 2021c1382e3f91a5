#pragma once

#include <array>

namespace evt {

// Generalized Pareto for threshold excesses: 1 - F(y) = (1 + gamma y / sigma)^(-1/gamma), y >= 0.
struct GpdParams {
    double gamma = 0.0;
    double sigma = 1.0;
};

void check_params(const GpdParams& params);

double gpd_loglik(const GpdParams& params, double y);  // -inf outside support
double gpd_cdf(const GpdParams& params, double y);
double gpd_pdf(const GpdParams& params, double y);
double gpd_quantile(const GpdParams& params, double s);

// Gradient and second derivatives of gpd_loglik in (gamma, sigma);
// hessian packed as (gg, gs, ss). Require y strictly inside the support.
std::array<double, 2> gpd_score(const GpdParams& params, double y);
std::array<double, 3> gpd_hessian(const GpdParams& params, double y);

}  // namespace evt
