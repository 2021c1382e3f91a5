#include "evt/numerics.hpp"

#include <cmath>

#include "evt/detail/stable.hpp"
#include "evt/detail/tanh_sinh.hpp"

namespace evt {

namespace {

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

double gamma_lanczos(double x) {
    // valid for x >= 0.5
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
    double t = x + kLanczosG - 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    if (x < 0.5) return gamma_lanczos(x + 1.0) / x;
    return gamma_lanczos(x);
}

double digamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma_fn: requires x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series with Bernoulli numbers through x^-14
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                    inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 -
                    inv2 * (1.0 / 132.0 -
                    inv2 * (691.0 / 32760.0 -
                    inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

double gamma_prime(double x) { return gamma_fn(x) * digamma_fn(x); }

namespace {

// (Gamma(1+a) - 1) / a, smooth through a = 0.
double gamma1p_over(double a) {
    if (std::abs(a) >= 1e-4) return (gamma_fn(1.0 + a) - 1.0) / a;
    const double c2 = 0.5 * (euler_gamma * euler_gamma + M_PI * M_PI / 6.0);
    return -euler_gamma + c2 * a;
}

}  // namespace

double upper_incomplete_gamma(double a, double x) {
    if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: requires x > 0");
    if (!(a > -1.0) || !(a < 1.0))
        throw std::domain_error("upper_incomplete_gamma: implemented for a in (-1, 1)");
    if (x >= 1.5) {
        // Lentz continued fraction
        double b = x + 1.0 - a;
        double c = 1e308;
        double d = 1.0 / b;
        double h = d;
        for (int i = 1; i < 300; ++i) {
            const double an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < 1e-300) d = 1e-300;
            c = b + an / c;
            if (std::abs(c) < 1e-300) c = 1e-300;
            d = 1.0 / d;
            const double delta = d * c;
            h *= delta;
            if (std::abs(delta - 1.0) < 1e-16) break;
        }
        return std::exp(-x + a * std::log(x)) * h;
    }
    // Gamma(a,x) = (Gamma(a) - x^a/a) - x^a sum_{n>=1} (-x)^n / (n! (a+n)),
    // the leading bracket written cancellation-free through a = 0.
    const double L = std::log(x);
    const double lead = -L * detail::e0(a * L) + gamma1p_over(a);
    double sum = 0.0, term = 1.0;
    for (int n = 1; n < 80; ++n) {
        term *= -x / n;
        const double add = term / (a + n);
        sum += add;
        if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return lead - std::exp(a * L) * sum;
}

double integrate(const std::function<double(double)>& f, double lower, double upper,
                 const QuadratureSpec& spec) {
    auto wrapped = [&](double x, double d_lo, double d_hi, std::array<double, 1>& out) {
        (void)d_lo;
        (void)d_hi;
        out[0] = f(x);
    };
    return detail::tanh_sinh<1>(wrapped, lower, upper, spec, /*dist_aware=*/false)[0];
}

Vec3 mat_vec(const SymMatrix3& a, const Vec3& x) {
    Vec3 y{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) y[i] += a(i, j) * x[j];
    return y;
}

namespace {

// Expanded 3x3 LU with partial pivoting; b is overwritten with the solution.
void lu_solve(double m[3][3], double b[3]) {
    int piv[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(m[row][col]) > std::abs(m[best][col])) best = row;
        if (best != col) {
            for (int j = 0; j < 3; ++j) std::swap(m[col][j], m[best][j]);
            std::swap(b[col], b[best]);
            std::swap(piv[col], piv[best]);
        }
        double d = m[col][col];
        if (d == 0.0 || !std::isfinite(d))
            throw SingularMatrixError("solve3: singular or non-finite matrix");
        for (int row = col + 1; row < 3; ++row) {
            double factor = m[row][col] / d;
            for (int j = col; j < 3; ++j) m[row][j] -= factor * m[col][j];
            b[row] -= factor * b[col];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double s = b[row];
        for (int j = row + 1; j < 3; ++j) s -= m[row][j] * b[j];
        b[row] = s / m[row][row];
        if (!std::isfinite(b[row])) throw SingularMatrixError("solve3: non-finite solution");
    }
}

}  // namespace

Vec3 solve3(const SymMatrix3& a, const Vec3& rhs) {
    double m[3][3], b[3];
    for (int i = 0; i < 3; ++i) {
        b[i] = rhs[i];
        for (int j = 0; j < 3; ++j) m[i][j] = a(i, j);
    }
    lu_solve(m, b);
    return {b[0], b[1], b[2]};
}

SymMatrix3 invert3(const SymMatrix3& a) {
    SymMatrix3 inv;
    for (int col = 0; col < 3; ++col) {
        Vec3 e{};
        e[col] = 1.0;
        Vec3 x = solve3(a, e);
        for (int row = 0; row <= col; ++row) inv.entry(row, col) = x[row];
    }
    return inv;
}

bool is_negative_definite(const SymMatrix3& a) {
    // Cholesky of -A
    double l[3][3] = {};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = -a(i, j);
            for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
                if (!std::isfinite(l[i][j])) return false;
            }
        }
    }
    return true;
}

}  // namespace evt
