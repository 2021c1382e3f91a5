#include "evt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>

namespace evt {

RawSeries read_series(std::istream& in) {
    RawSeries out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": empty line", line_no);
        if (line[begin] == '#') continue;
        const char* start = line.c_str() + begin;
        char* end = nullptr;
        double v = std::strtod(start, &end);
        while (end && *end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == start || (end && *end != '\0'))
            throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + line + "'",
                             line_no);
        if (!std::isfinite(v))
            throw ParseError("line " + std::to_string(line_no) + ": non-finite value", line_no);
        out.values.push_back(v);
    }
    if (out.values.empty()) throw ParseError("input contains no data values", line_no);
    return out;
}

RawSeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return read_series(in);
}

BlockMaximaSample block_maxima(const RawSeries& series, std::size_t m) {
    const std::size_t n = series.size();
    if (m < 1 || m > n) throw std::invalid_argument("block_maxima: require 1 <= m <= n");
    BlockMaximaSample out;
    out.block_size = m;
    out.num_blocks = n / m;
    out.maxima.reserve(out.num_blocks);
    for (std::size_t b = 0; b < out.num_blocks; ++b) {
        double mx = series.values[b * m];
        for (std::size_t i = 1; i < m; ++i) mx = std::max(mx, series.values[b * m + i]);
        out.maxima.push_back(mx);
    }
    out.sorted_maxima = out.maxima;
    std::sort(out.sorted_maxima.begin(), out.sorted_maxima.end());
    return out;
}

BlockMaximaSample make_block_sample(std::vector<double> maxima, std::size_t m) {
    BlockMaximaSample out;
    out.block_size = m;
    out.num_blocks = maxima.size();
    out.maxima = std::move(maxima);
    out.sorted_maxima = out.maxima;
    std::sort(out.sorted_maxima.begin(), out.sorted_maxima.end());
    return out;
}

ExcessSample excesses_over_top_k(const RawSeries& series, std::size_t k) {
    const std::size_t n = series.size();
    if (k < 1 || k >= n) throw std::invalid_argument("excesses_over_top_k: require 1 <= k < n");
    std::vector<double> sorted = series.values;
    std::sort(sorted.begin(), sorted.end());
    ExcessSample out;
    out.threshold = sorted[n - k - 1];  // (k+1)-th largest
    out.excesses.reserve(k);
    for (std::size_t i = n - k; i < n; ++i)
        if (sorted[i] > out.threshold) out.excesses.push_back(sorted[i] - out.threshold);
    out.short_count = out.excesses.size() < k;
    return out;
}

ExcessSample make_excess_sample(std::vector<double> excesses, double threshold) {
    ExcessSample out;
    out.threshold = threshold;
    out.excesses = std::move(excesses);
    return out;
}

double empirical_quantile(const BlockMaximaSample& sample, double s, double a_m, double b_m) {
    if (!(s > 0.0) || !(s < 1.0))
        throw std::domain_error("empirical_quantile: require s in (0,1)");
    if (!(a_m > 0.0)) throw std::invalid_argument("empirical_quantile: require a_m > 0");
    if (sample.num_blocks == 0) throw std::invalid_argument("empirical_quantile: empty sample");
    const std::size_t idx = static_cast<std::size_t>(std::ceil(s * sample.num_blocks));
    const std::size_t clamped = idx < 1 ? 1 : (idx > sample.num_blocks ? sample.num_blocks : idx);
    return (sample.sorted_maxima[clamped - 1] - b_m) / a_m;
}

}  // namespace evt
