#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace evt {

struct RawSeries {
    std::vector<double> values;
    std::size_t size() const { return values.size(); }
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line_arg)
        : std::runtime_error(what), line(line_arg) {}
    std::size_t line;
};

// One numeric value per line; lines starting with '#' are comments. Anything
// else is a hard error carrying the offending line number.
RawSeries read_series(std::istream& in);
RawSeries read_series_file(const std::string& path);

struct BlockMaximaSample {
    std::size_t block_size = 1;
    std::size_t num_blocks = 0;
    std::vector<double> maxima;         // block order
    std::vector<double> sorted_maxima;  // nondecreasing
};

// Partition into floor(n/m) complete blocks, trailing partial block discarded.
BlockMaximaSample block_maxima(const RawSeries& series, std::size_t m);

// Wrap an already-computed maxima vector (simulation path).
BlockMaximaSample make_block_sample(std::vector<double> maxima, std::size_t m);

struct ExcessSample {
    double threshold = 0.0;
    std::vector<double> excesses;  // all > 0
    // Ties at the threshold can leave fewer than the requested k excesses.
    bool short_count = false;
};

// Threshold at the (k+1)-th largest value; excesses are the strictly larger
// values minus the threshold.
ExcessSample excesses_over_top_k(const RawSeries& series, std::size_t k);

ExcessSample make_excess_sample(std::vector<double> excesses, double threshold = 0.0);

// (M_{ceil(ks):k} - b_m) / a_m.
double empirical_quantile(const BlockMaximaSample& sample, double s, double a_m, double b_m);

}  // namespace evt
