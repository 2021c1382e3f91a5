#pragma once

#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "evt/asymptotics.hpp"

namespace evt {

// Distribution-free part of the optimal asymptotic mean square error:
// (BIAS^2)^(1/(1-2 rho)) (VAR)^(-2 rho/(1-2 rho)). Requires rho < 0, bias != 0.
double amse_factor(double variance, double bias, double rho);

// Distribution-free part of the AMSE-optimal number of observations:
// (VAR^2 / BIAS^2)^(1/(1-2 rho)).
double k0_factor(double variance, double bias, double rho);

struct GridCell {
    double gamma = 0.0, rho = 0.0;
    double var_a = 0.0, var_b = 0.0;
    double bias_a = 0.0, bias_b = 0.0;
    double amse_a = 0.0, amse_b = 0.0;      // NaN where undefined
    double amse_ratio = 0.0, k0_ratio = 0.0;
    unsigned flags = 0;
};

inline constexpr unsigned kFlagRhoZero = 1u;     // AMSE/k0 undefined at rho = 0
inline constexpr unsigned kFlagZeroBiasA = 2u;   // bias_a crosses zero, k0 -> inf
inline constexpr unsigned kFlagZeroBiasB = 4u;

struct ComparisonGrid {
    EstimatorKind kind_a = EstimatorKind::pot_mle;
    EstimatorKind kind_b = EstimatorKind::bm_mle;
    std::vector<double> gamma_values;
    std::vector<double> rho_values;
    std::vector<GridCell> cells;  // gamma-major, rho within

    const GridCell& at(std::size_t gi, std::size_t ri) const {
        return cells[gi * rho_values.size() + ri];
    }
};

// Evaluates both estimators with lambda = 1 on the grid (lambda cancels in
// every ratio) and fills per-cell ratios a/b.
ComparisonGrid build_grid(EstimatorKind kind_a, EstimatorKind kind_b,
                          std::pair<double, double> gamma_range,
                          std::pair<double, double> rho_range, std::pair<int, int> steps);

// Spec window: gamma in [-0.45, 0.45] step 0.01, rho in [-1, -0.05] step 0.05.
ComparisonGrid build_default_grid(EstimatorKind kind_a, EstimatorKind kind_b);

inline constexpr std::string_view grid_csv_header =
    "gamma,rho,var_a,var_b,bias_a,bias_b,amse_ratio,k0_ratio,flags";

void write_grid_csv(const ComparisonGrid& grid, std::ostream& out);

}  // namespace evt
