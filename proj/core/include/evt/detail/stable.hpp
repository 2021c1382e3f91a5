#pragma once

#include <cmath>

// Removable-singularity kernels shared by the GEV/GPD likelihood derivatives
// and the second-order limit function. Every function here is smooth on the
// whole real line; the closed forms cancel catastrophically near 0, so small
// arguments switch to truncated power series.

namespace evt::detail {

// ek(w) = integral of t^k e^{wt} over t in (0,1); ek'(w) = e_{k+1}(w).

inline double e0(double w) {
    if (w == 0.0) return 1.0;
    return std::expm1(w) / w;
}

inline double e1(double w) {
    if (std::abs(w) <= 1.0) {
        double term = 1.0, sum = 0.5;  // n = 0 contributes 1/2
        for (int n = 1; n < 26; ++n) {
            term *= w / n;
            double add = term / (n + 2);
            sum += add;
            if (std::abs(add) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(w) * (w - 1.0) + 1.0) / (w * w);
}

inline double e2(double w) {
    if (std::abs(w) <= 1.0) {
        double term = 1.0, sum = 1.0 / 3.0;
        for (int n = 1; n < 26; ++n) {
            term *= w / n;
            double add = term / (n + 3);
            sum += add;
            if (std::abs(add) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(w) * (w * w - 2.0 * w + 2.0) - 2.0) / (w * w * w);
}

inline double e3(double w) {
    if (std::abs(w) <= 1.0) {
        double term = 1.0, sum = 0.25;
        for (int n = 1; n < 26; ++n) {
            term *= w / n;
            double add = term / (n + 4);
            sum += add;
            if (std::abs(add) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    double w2 = w * w;
    return (std::exp(w) * (w2 * w - 3.0 * w2 + 6.0 * w - 6.0) + 6.0) / (w2 * w2);
}

inline double e4(double w) {
    if (std::abs(w) <= 1.0) {
        double term = 1.0, sum = 0.2;
        for (int n = 1; n < 26; ++n) {
            term *= w / n;
            double add = term / (n + 5);
            sum += add;
            if (std::abs(add) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    double w2 = w * w;
    return (std::exp(w) * (w2 * w2 - 4.0 * w2 * w + 12.0 * w2 - 24.0 * w + 24.0) - 24.0) /
           (w2 * w2 * w);
}

// hfun(w) = (e^w - 1 - w) / w^2, hfun(0) = 1/2.
inline double hfun(double w) {
    if (std::abs(w) <= 1.0) {
        // sum of w^n / (n+2)!
        double term = 0.5, sum = 0.5;
        for (int n = 1; n < 26; ++n) {
            term *= w / (n + 2);
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::expm1(w) - w) / (w * w);
}

// hfun'(w) = (e^w (w-2) + w + 2) / w^3, hfun'(0) = 1/6.
inline double hfun_d(double w) {
    if (std::abs(w) <= 1.0) {
        // sum of (n+1) w^n / (n+3)!
        double pw = 1.0, sum = 1.0 / 6.0;
        double fact = 6.0;  // (0+3)!
        for (int n = 1; n < 26; ++n) {
            pw *= w;
            fact *= (n + 3);
            double add = (n + 1) * pw / fact;
            sum += add;
            if (std::abs(add) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(w) * (w - 2.0) + w + 2.0) / (w * w * w);
}

// powm1_over(x, c) = (x^c - 1) / c for x > 0, with the c = 0 limit log x.
inline double powm1_over(double x, double c) {
    double l = std::log(x);
    if (c == 0.0) return l;
    return std::expm1(c * l) / c;
}

// log1p_over(y, c) = log(1 + c y) / c for 1 + c y > 0, c = 0 limit y.
inline double log1p_over(double y, double c) {
    if (c == 0.0) return y;
    return std::log1p(c * y) / c;
}

}  // namespace evt::detail
