#pragma once

#include "evt/numerics.hpp"

namespace evt {

// Three-parameter GEV model G((x-mu)/sigma) with G_gamma(x) = exp(-(1+gamma x)^(-1/gamma)).
struct GevParams {
    double gamma = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
};

void check_params(const GevParams& theta);  // throws std::invalid_argument

// Misspecification regime: true index gamma0, second-order index rho, and the
// asymptotic bias scale lambda = lim sqrt(k) A(m).
struct SecondOrderSpec {
    double gamma0 = 0.0;
    double rho = 0.0;
    double lambda = 0.0;
};

// One-observation GEV log-likelihood at mu=0, sigma=1; -inf outside support.
double g_loglik(double gamma, double x);

// log-likelihood of the three-parameter model; -inf outside support.
double loglik(const GevParams& theta, double x);

// z(theta, x) = (1 + gamma (x-mu)/sigma)^(-1/gamma), the tail-stable variable
// all likelihood derivatives factor through. Throws outside the support.
double z_transform(const GevParams& theta, double x);

// Quantile of G_gamma: ((-log s)^(-gamma) - 1)/gamma.
double quantile(double gamma0, double s);

double cdf(const GevParams& theta, double x);
double pdf(const GevParams& theta, double x);

// Gradient of loglik in (gamma, mu, sigma). Requires x strictly inside the support.
Vec3 score(const GevParams& theta, double x);

// Matrix of second parameter derivatives of loglik.
SymMatrix3 hessian(const GevParams& theta, double x);

// (d2l/dxdgamma, d2l/dxdmu, d2l/dxdsigma).
Vec3 mixed_dx_dtheta(const GevParams& theta, double x);

// Second-order limit function: double integral of s^(gamma0-1) u^(rho-1) over
// 1 < u < s < x, in closed form across all (gamma0, rho) regimes.
double h_second_order(double gamma0, double rho, double x);

namespace detail {

// First- and second-order derivatives of g(gamma, u) = (1+gamma) log z - z
// with respect to u (x) and gamma, all expressed through z, log z and the
// kernel hfun(gamma log z). Uniformly stable through gamma = 0.
struct GevChain {
    double z = 0, logz = 0;
    double g = 0;
    double gx = 0, gg = 0;
    double gxx = 0, gxg = 0, ggg = 0;
};

GevChain gev_chain(double gamma, double u);        // requires 1 + gamma*u > 0
GevChain gev_chain_from_z(double gamma, double z); // z > 0 supplied exactly

bool in_support(const GevParams& theta, double x);

// Score / hessian / mixed derivative assembled from a chain at u = (x-mu)/sigma.
Vec3 score_from_chain(const GevChain& c, double u, double sigma);
SymMatrix3 hessian_from_chain(const GevChain& c, double u, double sigma);
Vec3 mixed_from_chain(const GevChain& c, double u, double sigma);

}  // namespace detail

}  // namespace evt
