#pragma once

#include <cstddef>
#include <string>

#include "evt/estimators.hpp"
#include "evt/montecarlo.hpp"

namespace evt {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

struct FitMeta {
    std::string method;
    std::string input;
    std::size_t n = 0;           // raw series length
    std::size_t k = 0;           // blocks / excesses used
    std::size_t block_size = 0;  // BM methods
    std::size_t top_k = 0;       // POT methods
    double threshold = 0.0;      // POT methods
    bool short_count = false;    // tie policy reduced the excess count
};

std::string fit_report_json(const GevFit& fit, const FitMeta& meta);
std::string fit_report_json(const GpdFit& fit, const FitMeta& meta);
std::string fit_report_csv(const GevFit& fit, const FitMeta& meta);
std::string fit_report_csv(const GpdFit& fit, const FitMeta& meta);

// Information matrix, bias vector and the Gaussian law of the normalized
// errors for one misspecification regime; route records closed/numeric.
std::string asym_report_json(const SecondOrderSpec& spec, bool force_numeric);

std::string mc_summary_json(const McSummary& summary);

}  // namespace evt
