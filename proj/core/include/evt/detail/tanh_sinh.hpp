#pragma once

#include <array>
#include <cmath>
#include <string>

#include "evt/numerics.hpp"

namespace evt::detail {

// Vector tanh-sinh rule over a finite interval with level doubling.
//
// Callback contract: f(x, dist_lower, dist_upper, out) where dist_* are the
// exact distances from the node to the endpoints; x itself may have rounded
// onto an endpoint for tiny distances. Integrands with endpoint singularities
// should reconstruct their variable from the distances.
//
// In open_interval mode, non-finite values are tolerated once the running
// contribution on that side has decayed below noise, which is where weighted
// tails of integrable singularities under- or overflow; anywhere else they
// are an error.
//
// dist_aware: the callback reconstructs its variable from the distances, so
// nodes whose x rounds onto an endpoint are still evaluated. The plain-f(x)
// interface passes false; such nodes are then dropped, and an integrand whose
// tail still matters there fails the convergence test rather than silently
// losing mass.
template <int N, class F>
std::array<double, N> tanh_sinh(F&& f, double lower, double upper, const QuadratureSpec& spec,
                                bool dist_aware = true) {
    if (!(lower < upper)) throw std::invalid_argument("tanh_sinh: need lower < upper");
    if (!(spec.abs_tol > 0) || !(spec.rel_tol > 0) || spec.max_subdivisions < 1)
        throw std::invalid_argument("tanh_sinh: invalid QuadratureSpec");

    const bool open = spec.endpoint_handling == QuadratureSpec::Endpoints::open_interval;
    const double r = 0.5 * (upper - lower);
    const double center = 0.5 * (lower + upper);
    const double t_max = 6.115;
    const int max_level = 12;

    int evals = 0;
    bool budget_hit = false;
    std::array<double, N> total{};
    double trunc_norm = 0.0;  // running scale used by the tail cutoff

    // side: -1 toward lower, +1 toward upper, 0 center node.
    // Returns false when the node was skipped or stopped mattering.
    auto add_node = [&](double t, int side, double h, std::array<double, N>& acc) -> bool {
        const double big_t = 0.5 * M_PI * std::sinh(t);
        const double em = std::exp(-2.0 * big_t);
        const double dist = 2.0 * em / (1.0 + em);  // 1 - tanh(big_t)
        const double weight = 0.5 * M_PI * std::cosh(t) * 4.0 * em / ((1.0 + em) * (1.0 + em));
        if (!(dist > 0.0) || !(weight > 0.0)) return false;

        double d_lo, d_hi, x;
        if (side < 0) {
            d_lo = r * dist;
            d_hi = (upper - lower) - d_lo;
            x = lower + d_lo;
            if (x <= lower && !dist_aware) return false;
        } else if (side > 0) {
            d_hi = r * dist;
            d_lo = (upper - lower) - d_hi;
            x = upper - d_hi;
            if (x >= upper && !dist_aware) return false;
        } else {
            x = center;
            d_lo = d_hi = r;
        }

        std::array<double, N> val{};
        f(x, d_lo, d_hi, val);
        ++evals;

        bool finite = true;
        for (double v : val)
            if (!std::isfinite(v)) finite = false;
        if (!finite) {
            if (open && side != 0) return false;  // endpoint blow-up past useful precision
            throw QuadratureError("integrate: non-finite integrand value inside the interval");
        }

        double contrib = 0.0;
        for (int i = 0; i < N; ++i) {
            acc[i] += weight * val[i];
            contrib = std::max(contrib, std::abs(weight * val[i]) * h * r);
        }
        const double cut = 1e-3 * std::max(spec.abs_tol, spec.rel_tol * trunc_norm);
        return contrib >= cut;
    };

    double h = 1.0;
    std::array<double, N> prev{};
    for (int level = 0; level <= max_level; ++level) {
        std::array<double, N> acc{};
        if (level == 0) add_node(0.0, 0, h, acc);
        const double t0 = level == 0 ? 1.0 : h;
        const double step = level == 0 ? 1.0 : 2.0 * h;
        for (int side = -1; side <= 1; side += 2) {
            int lull = 0;
            for (double t = t0; t < t_max; t += step) {
                if (evals >= spec.max_subdivisions) {
                    budget_hit = true;
                    break;
                }
                lull = add_node(t, side, h, acc) ? 0 : lull + 1;
                if (lull >= 2) break;
            }
        }

        if (level == 0) {
            for (int i = 0; i < N; ++i) total[i] = h * r * acc[i];
        } else {
            for (int i = 0; i < N; ++i) total[i] = 0.5 * total[i] + h * r * acc[i];
        }
        trunc_norm = 0.0;
        for (double v : total) trunc_norm = std::max(trunc_norm, std::abs(v));

        if (budget_hit)
            throw QuadratureError("integrate: did not converge within max_subdivisions (" +
                                  std::to_string(spec.max_subdivisions) + " evaluations)");

        if (level >= 3) {
            bool ok = true;
            for (int i = 0; i < N; ++i) {
                double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total[i]));
                if (std::abs(total[i] - prev[i]) > tol) ok = false;
            }
            if (ok) return total;
        }
        prev = total;
        h *= 0.5;
    }
    throw QuadratureError("integrate: did not converge at maximal refinement level");
}

// Convenience wrapper over (0,1): f(s, one_minus_s, out), both arguments exact
// near their respective endpoints.
template <int N, class F>
std::array<double, N> integrate_unit(F&& f, const QuadratureSpec& spec) {
    return tanh_sinh<N>(
        [&](double /*x*/, double d_lo, double d_hi, std::array<double, N>& out) {
            double s, oms;
            if (d_lo <= d_hi) {
                s = d_lo;
                oms = 1.0 - d_lo;
            } else {
                oms = d_hi;
                s = 1.0 - d_hi;
            }
            f(s, oms, out);
        },
        0.0, 1.0, spec);
}

}  // namespace evt::detail
