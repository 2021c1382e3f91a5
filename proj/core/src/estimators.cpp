#include "evt/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "evt/asymptotics.hpp"
#include "evt/detail/stable.hpp"

namespace evt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_equal(const std::vector<double>& xs) {
    for (double v : xs)
        if (v != xs.front()) return false;
    return true;
}

// Smallest sigma keeping every observation strictly inside the support of
// (gamma, mu, .); returns 0 when any sigma works.
double min_feasible_sigma(double gamma, double mu, double lo, double hi) {
    if (gamma > 0.0) return gamma * (mu - lo);
    if (gamma < 0.0) return -gamma * (hi - mu);
    return 0.0;
}

GevParams make_feasible(GevParams theta, double lo, double hi) {
    const double need = min_feasible_sigma(theta.gamma, theta.mu, lo, hi);
    if (theta.sigma <= need) theta.sigma = 1.25 * need + 1e-12;
    return theta;
}

// Moment-free profile initializer: per gamma on a coarse grid, location and
// scale from two sample quantiles, keep the best likelihood.
GevParams grid_init(const std::vector<double>& sorted, double* best_ll) {
    static constexpr double grid[] = {-0.45, -0.3, -0.15, 0.0, 0.15, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0};
    const std::size_t k = sorted.size();
    const double q25 = sorted[(k - 1) / 4];
    const double q75 = sorted[(3 * (k - 1)) / 4];
    const double lo = sorted.front(), hi = sorted.back();
    GevParams best;
    *best_ll = -kInf;
    for (double g : grid) {
        const double z25 = quantile(g, 0.25), z75 = quantile(g, 0.75);
        double sigma = (q75 - q25) / (z75 - z25);
        if (!(sigma > 0.0) || !std::isfinite(sigma)) continue;
        GevParams trial{g, q25 - sigma * z25, sigma};
        trial = make_feasible(trial, lo, hi);
        double ll;
        if (!detail::gev_sample_score(trial, sorted, &ll, nullptr, nullptr)) continue;
        if (ll > *best_ll) {
            *best_ll = ll;
            best = trial;
        }
    }
    if (*best_ll == -kInf) {
        // flat fallback, always feasible
        best = {0.1, q25, std::max(q75 - q25, 1e-8)};
        best = make_feasible(best, lo, hi);
    }
    return best;
}

}  // namespace

namespace detail {

template <int R>
std::array<double, R> sample_pwm(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    std::array<double, R> b{};
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        for (int r = 0; r < R; ++r) {
            b[r] += w * sorted[i];
            w *= (static_cast<double>(i) - r) / (static_cast<double>(n) - r - 1);
        }
    }
    for (int r = 0; r < R; ++r) b[r] /= n;
    return b;
}
template std::array<double, 2> sample_pwm<2>(const std::vector<double>&);
template std::array<double, 3> sample_pwm<3>(const std::vector<double>&);

bool gev_sample_score(const GevParams& theta, const std::vector<double>& xs, double* loglik_out,
                      Vec3* score_out, SymMatrix3* hess_out) {
    const double log_sigma = std::log(theta.sigma);
    double ll = 0.0;
    Vec3 sc{};
    SymMatrix3 hs;
    for (double x : xs) {
        const double u = (x - theta.mu) / theta.sigma;
        if (theta.gamma != 0.0 && 1.0 + theta.gamma * u <= 0.0) return false;
        const auto c = gev_chain(theta.gamma, u);
        if (!std::isfinite(c.g)) return false;
        ll += c.g - log_sigma;
        if (score_out) {
            const Vec3 s1 = score_from_chain(c, u, theta.sigma);
            for (int i = 0; i < 3; ++i) sc[i] += s1[i];
        }
        if (hess_out) hs += hessian_from_chain(c, u, theta.sigma);
    }
    if (loglik_out) *loglik_out = ll;
    if (score_out) *score_out = sc;
    if (hess_out) *hess_out = hs;
    return true;
}

}  // namespace detail

GevFit fit_bm_pwm(const BlockMaximaSample& sample) {
    GevFit fit;
    const std::size_t k = sample.num_blocks;
    if (k < 4) throw std::invalid_argument("fit_bm_pwm: require k >= 4");
    const auto& xs = sample.sorted_maxima;
    if (all_equal(xs)) {
        fit.diag.message = "degenerate sample: all block maxima equal";
        return fit;
    }

    const auto b = detail::sample_pwm<3>(xs);
    const double w = 2.0 * b[1] - b[0];
    const double u = 3.0 * b[2] - b[0];
    if (w == 0.0 || !std::isfinite(w) || !std::isfinite(u)) {
        fit.diag.message = "degenerate probability weighted moments (2b1 - b0 = 0)";
        return fit;
    }
    const double target = u / w;
    // (3^g - 1)/(2^g - 1) is increasing from 1 to infinity
    auto ratio = [](double g) {
        return detail::powm1_over(3.0, g) / detail::powm1_over(2.0, g);
    };
    if (!(target > 1.0)) {
        fit.diag.message = "PWM moment ratio outside the solvable range";
        return fit;
    }
    double lo = -30.0, hi = 30.0;
    if (ratio(lo) > target || ratio(hi) < target) {
        fit.diag.message = "PWM moment ratio outside the bracket";
        return fit;
    }
    int iters = 0;
    for (; iters < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++iters) {
        const double mid = 0.5 * (lo + hi);
        (ratio(mid) < target ? lo : hi) = mid;
    }
    const double g = 0.5 * (lo + hi);
    if (g > 0.999) {
        fit.diag.message = "PWM shape estimate at the gamma = 1 moment boundary";
        fit.params.gamma = g;
        fit.diag.out_of_theory = true;
        return fit;
    }
    const double gamma_1mg = gamma_fn(1.0 - g);
    const double sigma = w / (gamma_1mg * detail::powm1_over(2.0, g));
    // (Gamma(1-g) - 1)/g, with the g = 0 limit euler_gamma
    const double gm = std::abs(g) < 1e-8
                          ? euler_gamma
                          : (gamma_1mg - 1.0) / g;
    const double mu = b[0] - sigma * gm;

    fit.params = {g, mu, sigma};
    fit.diag.converged = sigma > 0.0 && std::isfinite(mu);
    fit.diag.iterations = iters;
    fit.diag.final_score_norm = std::abs(ratio(g) - target);
    fit.diag.out_of_theory = g >= 0.5;
    if (!fit.diag.converged) {
        fit.diag.message = "PWM scale/location relations produced invalid parameters";
        return fit;
    }

    // Observed GEV curvature at the PWM point, when it is support-feasible.
    SymMatrix3 hess;
    if (detail::gev_sample_score(fit.params, xs, nullptr, nullptr, &hess)) {
        fit.observed_hessian = hess;
        fit.diag.neg_definite = is_negative_definite(hess);
    }

    // Delta-method standard errors from the moment covariance of the limit law.
    if (g < 0.5) {
        try {
            const auto sig = registry::bm_pwm_moment_cov(g);
            SymMatrix3 cov =
                SymMatrix3::from_upper(sig[0], sig[1], sig[2], sig[3], sig[4], sig[5]);
            // FD Jacobian of the (b0,b1,b2) -> (gamma, mu, sigma) solve map at the
            // fitted point, normalized scale
            const double bn[3] = {b[0] / sigma, b[1] / sigma, b[2] / sigma};
            auto solve_map = [&](const double bb[3], double out[3]) {
                const double ww = 2.0 * bb[1] - bb[0], uu = 3.0 * bb[2] - bb[0];
                double lo2 = -30.0, hi2 = 30.0;
                for (int it = 0; it < 200 && hi2 - lo2 > 1e-13; ++it) {
                    const double mid = 0.5 * (lo2 + hi2);
                    (ratio(mid) < uu / ww ? lo2 : hi2) = mid;
                }
                const double gg = 0.5 * (lo2 + hi2);
                const double gf = gamma_fn(1.0 - gg);
                const double ss = ww / (gf * detail::powm1_over(2.0, gg));
                const double gmm = std::abs(gg) < 1e-8 ? euler_gamma : (gf - 1.0) / gg;
                out[0] = gg;
                out[1] = bb[0] - ss * gmm;
                out[2] = ss;
            };
            double jac[3][3];
            for (int j = 0; j < 3; ++j) {
                const double h = 1e-6 * std::max(1.0, std::abs(bn[j]));
                double bp[3] = {bn[0], bn[1], bn[2]}, bm2[3] = {bn[0], bn[1], bn[2]};
                bp[j] += h;
                bm2[j] -= h;
                double op[3], om[3];
                solve_map(bp, op);
                solve_map(bm2, om);
                for (int i = 0; i < 3; ++i) jac[i][j] = (op[i] - om[i]) / (2.0 * h);
            }
            const double scale[3] = {1.0, sigma, sigma};
            for (int i = 0; i < 3; ++i) {
                double v = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int c2 = 0; c2 < 3; ++c2) v += jac[i][a] * cov(a, c2) * jac[i][c2];
                fit.std_errors[i] = scale[i] * std::sqrt(std::max(v, 0.0) / k);
            }
        } catch (const std::exception&) {
            // leave NaN standard errors
        }
    }
    return fit;
}

namespace {

struct NewtonState {
    GevParams theta;
    double loglik = -kInf;
    Vec3 score{};
    SymMatrix3 hess;
};

// score and hessian in (gamma, mu, log sigma) coordinates
Vec3 to_eta_score(const NewtonState& st) {
    return {st.score[0], st.score[1], st.theta.sigma * st.score[2]};
}

SymMatrix3 to_eta_hess(const NewtonState& st) {
    const double s = st.theta.sigma;
    return SymMatrix3::from_upper(st.hess(0, 0), st.hess(0, 1), s * st.hess(0, 2), st.hess(1, 1),
                                  s * st.hess(1, 2),
                                  s * s * st.hess(2, 2) + s * st.score[2]);
}

}  // namespace

GevFit fit_bm_mle(const BlockMaximaSample& sample, const SolverConfig& config) {
    const std::size_t k = sample.num_blocks;
    if (k < 10) throw std::invalid_argument("fit_bm_mle: require k >= 10");
    if (!(config.tol_score > 0.0) || config.max_iter < 1)
        throw std::invalid_argument("fit_bm_mle: invalid SolverConfig");
    const auto& xs = sample.maxima;
    const double lo = sample.sorted_maxima.front(), hi = sample.sorted_maxima.back();

    GevFit fit;
    if (all_equal(xs)) {
        fit.diag.message = "degenerate sample: all block maxima equal";
        return fit;
    }

    // Initial point: user-supplied, else PWM, else profile grid; whichever
    // feasible candidate has the higher likelihood wins.
    GevParams init;
    if (config.init) {
        check_params(*config.init);
        init = make_feasible(*config.init, lo, hi);
    } else {
        double grid_ll;
        GevParams from_grid = grid_init(sample.sorted_maxima, &grid_ll);
        init = from_grid;
        GevFit pwm = fit_bm_pwm(sample);
        if (pwm.diag.converged) {
            GevParams cand = make_feasible(pwm.params, lo, hi);
            double cand_ll;
            if (detail::gev_sample_score(cand, xs, &cand_ll, nullptr, nullptr) &&
                cand_ll > grid_ll)
                init = cand;
        }
    }

    NewtonState cur;
    cur.theta = init;
    if (!detail::gev_sample_score(cur.theta, xs, &cur.loglik, &cur.score, &cur.hess)) {
        fit.diag.message = "initial point outside the support";
        return fit;
    }

    auto norm_score = [&](const NewtonState& st) {
        const Vec3 es = to_eta_score(st);
        double m = 0.0;
        for (double v : es) m = std::max(m, std::abs(v));
        return m / static_cast<double>(k);
    };

    int iter = 0;
    for (; iter < config.max_iter; ++iter) {
        fit.diag.final_score_norm = norm_score(cur);
        if (fit.diag.final_score_norm <= config.tol_score) break;

        const Vec3 es = to_eta_score(cur);
        const SymMatrix3 eh = to_eta_hess(cur);
        SymMatrix3 neg = eh;
        neg *= -1.0;

        Vec3 step;
        if (is_negative_definite(eh)) {
            step = solve3(neg, es);
        } else {
            // steepest ascent, trust-scaled
            double m = 0.0;
            for (double v : es) m = std::max(m, std::abs(v));
            const double c = m > 0.0 ? 0.25 / m : 0.0;
            step = {c * es[0], c * es[1], c * es[2]};
        }

        double alpha = 1.0;
        bool accepted = false;
        const int max_halvings = config.line_search == SolverConfig::LineSearch::halving ? 40 : 1;
        // non-decrease up to rounding noise in the summed log-likelihood
        const double slack = 1e-10 * (1.0 + std::abs(cur.loglik));
        for (int half = 0; half < max_halvings; ++half, alpha *= 0.5) {
            NewtonState next;
            next.theta = {cur.theta.gamma + alpha * step[0], cur.theta.mu + alpha * step[1],
                          cur.theta.sigma * std::exp(alpha * step[2])};
            if (next.theta.gamma < -0.99) continue;  // degenerate ridge guard
            if (!(next.theta.sigma > 0.0) || !std::isfinite(next.theta.sigma)) continue;
            if (!detail::gev_sample_score(next.theta, xs, &next.loglik, &next.score, &next.hess))
                continue;  // support violated
            if (next.loglik < cur.loglik - slack) continue;
            cur = next;
            accepted = true;
            break;
        }
        if (!accepted) {
            fit.diag.message = "line search failed after 40 halvings";
            fit.params = cur.theta;
            fit.observed_hessian = cur.hess;
            fit.diag.iterations = iter;
            fit.diag.neg_definite = is_negative_definite(cur.hess);
            return fit;
        }
    }

    fit.params = cur.theta;
    fit.observed_hessian = cur.hess;
    fit.diag.iterations = iter;
    fit.diag.final_score_norm = norm_score(cur);
    fit.diag.neg_definite = is_negative_definite(cur.hess);
    fit.diag.out_of_theory = cur.theta.gamma <= -0.5;
    if (fit.diag.final_score_norm <= config.tol_score && fit.diag.neg_definite) {
        fit.diag.converged = true;
        try {
            SymMatrix3 neg = cur.hess;
            neg *= -1.0;
            const SymMatrix3 cov = invert3(neg);
            for (int i = 0; i < 3; ++i)
                fit.std_errors[i] = std::sqrt(std::max(cov(i, i), 0.0));
        } catch (const SingularMatrixError&) {
            // keep NaN standard errors
        }
    } else if (fit.diag.message.empty()) {
        fit.diag.message = fit.diag.final_score_norm > config.tol_score
                               ? "max_iter reached before score tolerance"
                               : "observed Hessian not negative definite at the terminal point";
    }
    return fit;
}

GpdFit fit_pot_pwm(const ExcessSample& sample) {
    GpdFit fit;
    const std::size_t k = sample.excesses.size();
    if (k < 2) throw std::invalid_argument("fit_pot_pwm: require k >= 2");
    std::vector<double> xs = sample.excesses;
    std::sort(xs.begin(), xs.end());
    if (all_equal(xs)) {
        fit.diag.message = "degenerate sample: all excesses equal";
        return fit;
    }
    // a_r = mean of x (1 - F)^r weights: a0 the mean, a1 with (n-i)/(n-1)
    const std::size_t n = xs.size();
    double a0 = 0.0, a1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        a0 += xs[i];
        a1 += xs[i] * (static_cast<double>(n - 1 - i)) / (static_cast<double>(n) - 1.0);
    }
    a0 /= n;
    a1 /= n;
    const double denom = a0 - 2.0 * a1;
    if (denom == 0.0) {
        fit.diag.message = "degenerate probability weighted moments (a0 - 2 a1 = 0)";
        return fit;
    }
    const double g = 2.0 - a0 / denom;
    const double sigma = 2.0 * a0 * a1 / denom;
    fit.params = {g, sigma};
    fit.diag.converged = sigma > 0.0 && std::isfinite(g);
    fit.diag.final_score_norm = 0.0;
    fit.diag.out_of_theory = g >= 0.5;
    if (!fit.diag.converged) {
        fit.diag.message = "PWM relations produced a nonpositive scale";
        return fit;
    }
    // curvature at the estimate, when feasible
    bool ok = true;
    std::array<double, 3> hess{};
    for (double y : xs) {
        if (!(1.0 + g * y / sigma > 0.0)) {
            ok = false;
            break;
        }
        const auto h = gpd_hessian(fit.params, y);
        for (int i = 0; i < 3; ++i) hess[i] += h[i];
    }
    if (ok) {
        fit.observed_hessian = hess;
        fit.diag.neg_definite = hess[0] < 0.0 && hess[0] * hess[2] - hess[1] * hess[1] > 0.0;
    }
    if (g < 0.5) {
        const auto c = registry::pot_pwm_moment_cov(g);
        const double d2 = denom * denom;
        const double jg[2] = {2.0 * a1 / d2, -2.0 * a0 / d2};
        const double js[2] = {-4.0 * a1 * a1 / d2, 2.0 * a0 * a0 / d2};
        // moment covariances scale with sigma^2
        const double s2 = sigma * sigma;
        const double vg = jg[0] * jg[0] * c[0] + 2.0 * jg[0] * jg[1] * c[1] + jg[1] * jg[1] * c[2];
        const double vs = js[0] * js[0] * c[0] + 2.0 * js[0] * js[1] * c[1] + js[1] * js[1] * c[2];
        // jacobian entries are in data units of a_r = sigma * (unit a_r)
        fit.std_errors[0] = std::sqrt(std::max(vg * s2, 0.0) / k);
        fit.std_errors[1] = std::sqrt(std::max(vs * s2, 0.0) / k);
    }
    return fit;
}

GpdFit fit_pot_mle(const ExcessSample& sample, const SolverConfig& config) {
    const std::size_t k = sample.excesses.size();
    if (k < 10) throw std::invalid_argument("fit_pot_mle: require k >= 10");
    if (!(config.tol_score > 0.0) || config.max_iter < 1)
        throw std::invalid_argument("fit_pot_mle: invalid SolverConfig");
    const auto& xs = sample.excesses;

    GpdFit fit;
    if (all_equal(xs)) {
        fit.diag.message = "degenerate sample: all excesses equal";
        return fit;
    }
    double xmax = 0.0, xmean = 0.0;
    for (double v : xs) {
        xmax = std::max(xmax, v);
        xmean += v;
    }
    xmean /= k;

    GpdParams cur;
    {
        GpdFit pwm = fit_pot_pwm(sample);
        cur = pwm.diag.converged ? pwm.params : GpdParams{0.1, xmean};
        if (cur.gamma < 0.0 && cur.sigma <= -cur.gamma * xmax)
            cur.sigma = 1.25 * -cur.gamma * xmax + 1e-12;
    }

    auto eval = [&](const GpdParams& p, double* ll, double* sg, double* ss, double* hgg,
                    double* hgs, double* hss) -> bool {
        double l = 0.0, s1 = 0.0, s2 = 0.0, h11 = 0.0, h12 = 0.0, h22 = 0.0;
        for (double y : xs) {
            if (p.gamma != 0.0 && 1.0 + p.gamma * y / p.sigma <= 0.0) return false;
            const double li = gpd_loglik(p, y);
            if (!std::isfinite(li)) return false;
            l += li;
            const auto sc = gpd_score(p, y);
            const auto h = gpd_hessian(p, y);
            s1 += sc[0];
            s2 += sc[1];
            h11 += h[0];
            h12 += h[1];
            h22 += h[2];
        }
        *ll = l;
        *sg = s1;
        *ss = s2;
        *hgg = h11;
        *hgs = h12;
        *hss = h22;
        return true;
    };

    double ll, sg, ss, hgg, hgs, hss;
    if (!eval(cur, &ll, &sg, &ss, &hgg, &hgs, &hss)) {
        fit.diag.message = "initial point outside the support";
        return fit;
    }

    int iter = 0;
    double score_norm = kInf;
    for (; iter < config.max_iter; ++iter) {
        // (gamma, log sigma) coordinates
        const double eg = sg, es = cur.sigma * ss;
        const double egg = hgg, egs = cur.sigma * hgs,
                     ess = cur.sigma * cur.sigma * hss + cur.sigma * ss;
        score_norm = std::max(std::abs(eg), std::abs(es)) / static_cast<double>(k);
        if (score_norm <= config.tol_score) break;

        const double det = egg * ess - egs * egs;
        double dg, ds;
        if (egg < 0.0 && det > 0.0) {
            dg = -(ess * eg - egs * es) / det;
            ds = -(-egs * eg + egg * es) / det;
        } else {
            const double m = std::max(std::abs(eg), std::abs(es));
            const double c = m > 0.0 ? 0.25 / m : 0.0;
            dg = c * eg;
            ds = c * es;
        }

        double alpha = 1.0;
        bool accepted = false;
        const int max_halvings = config.line_search == SolverConfig::LineSearch::halving ? 40 : 1;
        const double slack = 1e-10 * (1.0 + std::abs(ll));
        for (int half = 0; half < max_halvings; ++half, alpha *= 0.5) {
            GpdParams next{cur.gamma + alpha * dg, cur.sigma * std::exp(alpha * ds)};
            if (next.gamma < -0.99 || !(next.sigma > 0.0) || !std::isfinite(next.sigma)) continue;
            double ll2, sg2, ss2, hgg2, hgs2, hss2;
            if (!eval(next, &ll2, &sg2, &ss2, &hgg2, &hgs2, &hss2)) continue;
            if (ll2 < ll - slack) continue;
            cur = next;
            ll = ll2;
            sg = sg2;
            ss = ss2;
            hgg = hgg2;
            hgs = hgs2;
            hss = hss2;
            accepted = true;
            break;
        }
        if (!accepted) {
            fit.diag.message = "line search failed after 40 halvings";
            fit.params = cur;
            fit.observed_hessian = {hgg, hgs, hss};
            fit.diag.iterations = iter;
            return fit;
        }
    }

    fit.params = cur;
    fit.observed_hessian = {hgg, hgs, hss};
    fit.diag.iterations = iter;
    fit.diag.final_score_norm = std::max(std::abs(sg), std::abs(cur.sigma * ss)) / k;
    fit.diag.neg_definite = hgg < 0.0 && hgg * hss - hgs * hgs > 0.0;
    fit.diag.out_of_theory = cur.gamma <= -0.5;
    if (fit.diag.final_score_norm <= config.tol_score && fit.diag.neg_definite) {
        fit.diag.converged = true;
        const double det = hgg * hss - hgs * hgs;
        fit.std_errors[0] = std::sqrt(std::max(-hss / det, 0.0));
        fit.std_errors[1] = std::sqrt(std::max(-hgg / det, 0.0));
    } else if (fit.diag.message.empty()) {
        fit.diag.message = fit.diag.final_score_norm > config.tol_score
                               ? "max_iter reached before score tolerance"
                               : "observed Hessian not negative definite at the terminal point";
    }
    return fit;
}

}  // namespace evt
