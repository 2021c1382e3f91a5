#include "evt/gev.hpp"

#include <cmath>
#include <limits>

#include "evt/detail/stable.hpp"

namespace evt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void check_params(const GevParams& theta) {
    if (!std::isfinite(theta.gamma) || !std::isfinite(theta.mu) || !std::isfinite(theta.sigma) ||
        !(theta.sigma > 0.0))
        throw std::invalid_argument("GevParams: require finite parameters and sigma > 0");
}

namespace detail {

bool in_support(const GevParams& theta, double x) {
    return 1.0 + theta.gamma * (x - theta.mu) / theta.sigma > 0.0;
}

static GevChain chain_from_parts(double gamma, double z, double logz) {
    GevChain c;
    c.z = z;
    c.logz = logz;
    const double w = gamma * logz;   // = -log(1 + gamma u)
    const double invt = std::exp(w); // z^gamma = 1/(1 + gamma u)
    const double h0 = hfun(w);
    const double h1 = hfun_d(w);
    const double L = logz;
    const double L2 = L * L;
    const double opg = 1.0 + gamma;

    c.g = opg * L - z;
    c.gx = invt * (z - opg);
    c.gg = L2 * h0 * (opg - z) + L;
    c.gxx = opg * invt * invt * (gamma - z);
    c.gxg = invt * (opg * L2 * h0 * (z - gamma) - (opg - z) * L - 1.0);
    c.ggg = (opg - z) * (L2 * L * (L + 2.0) * h0 * h0 + gamma * L2 * L2 * h0 * h1 + L2 * L * h1) +
            2.0 * L2 * h0 - opg * L2 * L2 * h0 * h0;
    return c;
}

GevChain gev_chain(double gamma, double u) {
    const double logz = -log1p_over(u, gamma);
    return chain_from_parts(gamma, std::exp(logz), logz);
}

GevChain gev_chain_from_z(double gamma, double z) {
    return chain_from_parts(gamma, z, std::log(z));
}

Vec3 score_from_chain(const GevChain& c, double u, double sigma) {
    return {c.gg, -c.gx / sigma, -(u * c.gx + 1.0) / sigma};
}

SymMatrix3 hessian_from_chain(const GevChain& c, double u, double sigma) {
    const double s2 = sigma * sigma;
    return SymMatrix3::from_upper(c.ggg,                      // gamma gamma
                                  -c.gxg / sigma,             // gamma mu
                                  -u * c.gxg / sigma,         // gamma sigma
                                  c.gxx / s2,                 // mu mu
                                  (c.gx + u * c.gxx) / s2,    // mu sigma
                                  (2.0 * u * c.gx + u * u * c.gxx + 1.0) / s2);
}

Vec3 mixed_from_chain(const GevChain& c, double u, double sigma) {
    const double s2 = sigma * sigma;
    return {c.gxg / sigma, -c.gxx / s2, -(c.gx + u * c.gxx) / s2};
}

}  // namespace detail

double g_loglik(double gamma, double x) {
    if (gamma != 0.0 && 1.0 + gamma * x <= 0.0) return -kInf;
    const double logz = -detail::log1p_over(x, gamma);
    return (1.0 + gamma) * logz - std::exp(logz);
}

double loglik(const GevParams& theta, double x) {
    check_params(theta);
    return g_loglik(theta.gamma, (x - theta.mu) / theta.sigma) - std::log(theta.sigma);
}

double z_transform(const GevParams& theta, double x) {
    check_params(theta);
    const double u = (x - theta.mu) / theta.sigma;
    if (theta.gamma != 0.0 && 1.0 + theta.gamma * u <= 0.0)
        throw std::domain_error("z_transform: x outside the support");
    return std::exp(-detail::log1p_over(u, theta.gamma));
}

double quantile(double gamma0, double s) {
    if (!(s > 0.0) || !(s < 1.0)) throw std::domain_error("quantile: require s in (0,1)");
    return -detail::powm1_over(-std::log(s), -gamma0);
}

double cdf(const GevParams& theta, double x) {
    check_params(theta);
    const double u = (x - theta.mu) / theta.sigma;
    if (theta.gamma != 0.0 && 1.0 + theta.gamma * u <= 0.0) return theta.gamma > 0.0 ? 0.0 : 1.0;
    return std::exp(-std::exp(-detail::log1p_over(u, theta.gamma)));
}

double pdf(const GevParams& theta, double x) {
    const double l = loglik(theta, x);
    return l == -kInf ? 0.0 : std::exp(l);
}

Vec3 score(const GevParams& theta, double x) {
    check_params(theta);
    const double u = (x - theta.mu) / theta.sigma;
    if (theta.gamma != 0.0 && 1.0 + theta.gamma * u <= 0.0)
        throw std::domain_error("score: x outside the support");
    return detail::score_from_chain(detail::gev_chain(theta.gamma, u), u, theta.sigma);
}

SymMatrix3 hessian(const GevParams& theta, double x) {
    check_params(theta);
    const double u = (x - theta.mu) / theta.sigma;
    if (theta.gamma != 0.0 && 1.0 + theta.gamma * u <= 0.0)
        throw std::domain_error("hessian: x outside the support");
    return detail::hessian_from_chain(detail::gev_chain(theta.gamma, u), u, theta.sigma);
}

Vec3 mixed_dx_dtheta(const GevParams& theta, double x) {
    check_params(theta);
    const double u = (x - theta.mu) / theta.sigma;
    if (theta.gamma != 0.0 && 1.0 + theta.gamma * u <= 0.0)
        throw std::domain_error("mixed_dx_dtheta: x outside the support");
    return detail::mixed_from_chain(detail::gev_chain(theta.gamma, u), u, theta.sigma);
}

double h_second_order(double gamma0, double rho, double x) {
    if (!(x > 0.0)) throw std::domain_error("h_second_order: require x > 0");
    const double L = std::log(x);
    if (L == 0.0) return 0.0;
    const double a = gamma0 * L;
    const double b = rho * L;
    if (std::abs(b) < 0.01) {
        // expansion of (e0(a+b) - e0(a))/b around b = 0; e_k' = e_{k+1}
        double phi = detail::e1(a) +
                     b * (0.5 * detail::e2(a) +
                          b * (detail::e3(a) / 6.0 + b * detail::e4(a) / 24.0));
        return L * L * phi;
    }
    return L * L * (detail::e0(a + b) - detail::e0(a)) / b;
}

}  // namespace evt
