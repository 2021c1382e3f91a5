#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <utility>

namespace evt {

inline constexpr double euler_gamma = 0.57721566490153286060651209;

// Euler Gamma function, positive axis only.
double gamma_fn(double x);

// Digamma psi(x) = Gamma'(x)/Gamma(x), positive axis only.
double digamma_fn(double x);

// Gamma'(x), computed as Gamma(x) * psi(x).
double gamma_prime(double x);

// Upper incomplete Gamma(a, x) for a in (-1, 1) and x > 0, continuous through
// a = 0 where it equals the exponential integral E1(x).
double upper_incomplete_gamma(double a, double x);

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    // Budget of integrand evaluations before the rule reports non-convergence.
    int max_subdivisions = 2000;
    enum class Endpoints { open_interval, closed_interval };
    // open_interval: the integrand is never evaluated at the endpoints and may
    // have integrable power/log singularities there. closed_interval: any
    // non-finite value is an error.
    Endpoints endpoint_handling = Endpoints::open_interval;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integral of f over the finite interval (lower, upper) to within
// max(abs_tol, rel_tol*|I|), by tanh-sinh quadrature with level doubling.
double integrate(const std::function<double(double)>& f, double lower, double upper,
                 const QuadratureSpec& spec = {});

using Vec3 = std::array<double, 3>;

// Symmetric 3x3 matrix, upper triangle stored as (00,01,02,11,12,22).
class SymMatrix3 {
  public:
    SymMatrix3() : u_{} {}
    static SymMatrix3 from_upper(double a00, double a01, double a02, double a11, double a12,
                                 double a22) {
        SymMatrix3 m;
        m.u_ = {a00, a01, a02, a11, a12, a22};
        return m;
    }
    static SymMatrix3 identity() { return from_upper(1, 0, 0, 1, 0, 1); }

    double operator()(int i, int j) const { return u_[index(i, j)]; }
    double& entry(int i, int j) { return u_[index(i, j)]; }

    SymMatrix3& operator+=(const SymMatrix3& o) {
        for (int k = 0; k < 6; ++k) u_[k] += o.u_[k];
        return *this;
    }
    SymMatrix3& operator*=(double c) {
        for (double& v : u_) v *= c;
        return *this;
    }

  private:
    static int index(int i, int j) {
        if (i > j) std::swap(i, j);
        static constexpr int row_start[3] = {0, 3, 5};
        return row_start[i] + (j - i);
    }
    std::array<double, 6> u_;
};

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Vec3 mat_vec(const SymMatrix3& a, const Vec3& x);

// Solve A x = rhs by partially pivoted LU; throws SingularMatrixError.
Vec3 solve3(const SymMatrix3& a, const Vec3& rhs);

SymMatrix3 invert3(const SymMatrix3& a);

// True iff -A has a positive definite Cholesky factorization.
bool is_negative_definite(const SymMatrix3& a);

}  // namespace evt
