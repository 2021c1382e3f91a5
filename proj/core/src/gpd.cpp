#include "evt/gpd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "evt/detail/stable.hpp"

namespace evt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_support(const GpdParams& p, double y) {
    return y >= 0.0 && (p.gamma == 0.0 || 1.0 + p.gamma * y / p.sigma > 0.0);
}
}  // namespace

void check_params(const GpdParams& p) {
    if (!std::isfinite(p.gamma) || !std::isfinite(p.sigma) || !(p.sigma > 0.0))
        throw std::invalid_argument("GpdParams: require finite parameters and sigma > 0");
}

double gpd_loglik(const GpdParams& p, double y) {
    check_params(p);
    if (!in_support(p, y)) return -kInf;
    const double u = y / p.sigma;
    // -(1 + 1/gamma) log(1 + gamma u) = (1 + gamma) log z
    return (1.0 + p.gamma) * -detail::log1p_over(u, p.gamma) - std::log(p.sigma);
}

double gpd_cdf(const GpdParams& p, double y) {
    check_params(p);
    if (y <= 0.0) return 0.0;
    const double u = y / p.sigma;
    if (p.gamma != 0.0 && 1.0 + p.gamma * u <= 0.0) return 1.0;  // beyond the right endpoint
    return -std::expm1(-detail::log1p_over(u, p.gamma));
}

double gpd_pdf(const GpdParams& p, double y) {
    check_params(p);
    if (!in_support(p, y)) return 0.0;
    const double u = y / p.sigma;
    const double logz = -detail::log1p_over(u, p.gamma);
    return std::exp((1.0 + p.gamma) * logz) / p.sigma;
}

double gpd_quantile(const GpdParams& p, double s) {
    check_params(p);
    if (!(s > 0.0) || !(s < 1.0)) throw std::domain_error("gpd_quantile: require s in (0,1)");
    const double l = std::log1p(-s);  // log(1-s)
    if (p.gamma == 0.0) return -p.sigma * l;
    return p.sigma * std::expm1(-p.gamma * l) / p.gamma;
}

std::array<double, 2> gpd_score(const GpdParams& p, double y) {
    check_params(p);
    const double u = y / p.sigma;
    const double v = 1.0 + p.gamma * u;
    if (!(y >= 0.0) || !(v > 0.0)) throw std::domain_error("gpd_score: y outside the support");
    const double L = -detail::log1p_over(u, p.gamma);
    const double w = p.gamma * L;
    const double dg = L + (1.0 + p.gamma) * L * L * detail::hfun(w);
    const double ds = ((1.0 + p.gamma) * u / v - 1.0) / p.sigma;
    return {dg, ds};
}

std::array<double, 3> gpd_hessian(const GpdParams& p, double y) {
    check_params(p);
    const double u = y / p.sigma;
    const double v = 1.0 + p.gamma * u;
    if (!(y >= 0.0) || !(v > 0.0)) throw std::domain_error("gpd_hessian: y outside the support");
    const double L = -detail::log1p_over(u, p.gamma);
    const double w = p.gamma * L;
    const double h0 = detail::hfun(w);
    const double h1 = detail::hfun_d(w);
    const double L2 = L * L;
    const double opg = 1.0 + p.gamma;
    const double dgg =
        2.0 * L2 * h0 + opg * (2.0 * L2 * L * h0 * h0 + L2 * L * h1 + p.gamma * L2 * L2 * h0 * h1);
    const double dgs = (u / v - opg * u * u / (v * v)) / p.sigma;
    const double dss = (1.0 - opg * u / v - opg * u / (v * v)) / (p.sigma * p.sigma);
    return {dgg, dgs, dss};
}

}  // namespace evt
