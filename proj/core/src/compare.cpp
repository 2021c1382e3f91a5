#include "evt/compare.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "evt/report.hpp"

namespace evt {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kZeroBiasTol = 1e-12;
}

double amse_factor(double variance, double bias, double rho) {
    if (!(variance > 0.0)) throw std::domain_error("amse_factor: require variance > 0");
    if (!(rho < 0.0)) throw std::domain_error("amse_factor: require rho < 0");
    if (bias == 0.0) throw std::domain_error("amse_factor: bias must be nonzero");
    const double inv = 1.0 / (1.0 - 2.0 * rho);
    return std::pow(bias * bias, inv) * std::pow(variance, -2.0 * rho * inv);
}

double k0_factor(double variance, double bias, double rho) {
    if (!(variance > 0.0)) throw std::domain_error("k0_factor: require variance > 0");
    if (!(rho < 0.0)) throw std::domain_error("k0_factor: require rho < 0");
    if (bias == 0.0) throw std::domain_error("k0_factor: bias must be nonzero");
    const double v2 = variance * variance;
    return std::pow(v2 / (bias * bias), 1.0 / (1.0 - 2.0 * rho));
}

ComparisonGrid build_grid(EstimatorKind kind_a, EstimatorKind kind_b,
                          std::pair<double, double> gamma_range,
                          std::pair<double, double> rho_range, std::pair<int, int> steps) {
    if (!(gamma_range.first <= gamma_range.second) || !(rho_range.first <= rho_range.second))
        throw std::invalid_argument("build_grid: empty ranges");
    if (steps.first < 1 || steps.second < 1)
        throw std::invalid_argument("build_grid: need at least one step per axis");
    if (rho_range.second > 0.0)
        throw std::invalid_argument("build_grid: rho range must lie in [-1, 0]");

    ComparisonGrid grid;
    grid.kind_a = kind_a;
    grid.kind_b = kind_b;
    for (int i = 0; i < steps.first; ++i)
        grid.gamma_values.push_back(
            steps.first == 1 ? gamma_range.first
                             : gamma_range.first + (gamma_range.second - gamma_range.first) * i /
                                                       (steps.first - 1));
    for (int i = 0; i < steps.second; ++i)
        grid.rho_values.push_back(
            steps.second == 1 ? rho_range.first
                              : rho_range.first + (rho_range.second - rho_range.first) * i /
                                                      (steps.second - 1));

    grid.cells.reserve(grid.gamma_values.size() * grid.rho_values.size());
    // variances depend on gamma only; hoist them out of the rho loop
    for (double g : grid.gamma_values) {
        const double var_a = estimator_asym(kind_a, {g, -0.5, 0.0}).variance;
        const double var_b = estimator_asym(kind_b, {g, -0.5, 0.0}).variance;
        for (double r : grid.rho_values) {
            GridCell cell;
            cell.gamma = g;
            cell.rho = r;
            cell.var_a = var_a;
            cell.var_b = var_b;
            const SecondOrderSpec spec{g, r, 1.0};
            cell.bias_a = estimator_asym(kind_a, spec).bias;
            cell.bias_b = estimator_asym(kind_b, spec).bias;
            cell.amse_a = cell.amse_b = cell.amse_ratio = cell.k0_ratio = kNan;
            const double scale = std::max(std::abs(cell.bias_a), std::abs(cell.bias_b));
            if (r == 0.0) {
                cell.flags |= kFlagRhoZero;
            } else {
                if (std::abs(cell.bias_a) <= kZeroBiasTol * std::max(1.0, scale))
                    cell.flags |= kFlagZeroBiasA;
                if (std::abs(cell.bias_b) <= kZeroBiasTol * std::max(1.0, scale))
                    cell.flags |= kFlagZeroBiasB;
                if (!(cell.flags & (kFlagZeroBiasA | kFlagZeroBiasB))) {
                    cell.amse_a = amse_factor(cell.var_a, cell.bias_a, r);
                    cell.amse_b = amse_factor(cell.var_b, cell.bias_b, r);
                    cell.amse_ratio = cell.amse_a / cell.amse_b;
                    cell.k0_ratio = k0_factor(cell.var_a, cell.bias_a, r) /
                                    k0_factor(cell.var_b, cell.bias_b, r);
                }
            }
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

ComparisonGrid build_default_grid(EstimatorKind kind_a, EstimatorKind kind_b) {
    return build_grid(kind_a, kind_b, {-0.45, 0.45}, {-1.0, -0.05}, {91, 20});
}

namespace {

void append_flags(std::string& line, unsigned flags) {
    bool first = true;
    auto add = [&](const char* name) {
        if (!first) line += ';';
        line += name;
        first = false;
    };
    if (flags & kFlagRhoZero) add("rho_zero");
    if (flags & kFlagZeroBiasA) add("zero_bias_a");
    if (flags & kFlagZeroBiasB) add("zero_bias_b");
}

}  // namespace

void write_grid_csv(const ComparisonGrid& grid, std::ostream& out) {
    out << grid_csv_header << "\n";
    std::string line;
    for (const GridCell& c : grid.cells) {
        line.clear();
        line += format_double(c.gamma);
        line += ',';
        line += format_double(c.rho);
        line += ',';
        line += format_double(c.var_a);
        line += ',';
        line += format_double(c.var_b);
        line += ',';
        line += format_double(c.bias_a);
        line += ',';
        line += format_double(c.bias_b);
        line += ',';
        if (std::isfinite(c.amse_ratio)) line += format_double(c.amse_ratio);
        line += ',';
        if (std::isfinite(c.k0_ratio)) line += format_double(c.k0_ratio);
        line += ',';
        append_flags(line, c.flags);
        line += '\n';
        out << line;
    }
}

}  // namespace evt
