#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "evt/sampling.hpp"

using namespace evt;

TEST_SUITE_BEGIN("sampling");

TEST_CASE("block_maxima partitions and discards the trailing block") {
    const RawSeries s{{1, 5, 2, 4, 3, 6}};
    const BlockMaximaSample b = block_maxima(s, 2);
    CHECK(b.num_blocks == 3);
    CHECK(b.maxima == std::vector<double>{5, 4, 6});
    CHECK(b.sorted_maxima == std::vector<double>{4, 5, 6});

    const BlockMaximaSample whole = block_maxima(s, 6);
    CHECK(whole.num_blocks == 1);
    CHECK(whole.maxima == std::vector<double>{6});

    const RawSeries seven{{1, 2, 3, 4, 5, 6, 99}};
    const BlockMaximaSample trunc = block_maxima(seven, 2);
    CHECK(trunc.num_blocks == 3);  // the 99 falls in the discarded partial block
    CHECK(trunc.maxima == std::vector<double>{2, 4, 6});

    CHECK_THROWS_AS(block_maxima(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(block_maxima(s, 7), std::invalid_argument);
}

TEST_CASE("block_maxima is permutation sensitive only within blocks") {
    RawSeries s{{3, 1, 4, 1, 5, 9, 2, 6}};
    const auto base = block_maxima(s, 4);
    std::reverse(s.values.begin(), s.values.begin() + 4);  // permute inside block 1
    CHECK(block_maxima(s, 4).maxima == base.maxima);
}

TEST_CASE("block_maxima concatenation property") {
    const RawSeries a{{3, 1, 4, 1, 5, 9}};
    const RawSeries b{{2, 6, 5, 3, 5, 8}};
    RawSeries both = a;
    both.values.insert(both.values.end(), b.values.begin(), b.values.end());
    const auto ma = block_maxima(a, 3).maxima;
    const auto mb = block_maxima(b, 3).maxima;
    auto want = ma;
    want.insert(want.end(), mb.begin(), mb.end());
    CHECK(block_maxima(both, 3).maxima == want);
}

TEST_CASE("excesses_over_top_k") {
    const RawSeries s{{1, 2, 3, 4, 5}};
    const ExcessSample e = excesses_over_top_k(s, 2);
    CHECK(e.threshold == 3);
    CHECK(e.excesses == std::vector<double>{1, 2});
    CHECK_FALSE(e.short_count);

    const ExcessSample all = excesses_over_top_k(s, 4);
    CHECK(all.threshold == 1);  // the sample minimum

    CHECK_THROWS_AS(excesses_over_top_k(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(excesses_over_top_k(s, 5), std::invalid_argument);
}

TEST_CASE("excesses_over_top_k tie policy keeps excesses strictly positive") {
    const RawSeries s{{1, 2, 2, 2, 3}};
    const ExcessSample e = excesses_over_top_k(s, 2);
    // threshold is the 3rd largest (= 2); only the 3 exceeds it strictly
    CHECK(e.threshold == 2);
    CHECK(e.excesses == std::vector<double>{1});
    CHECK(e.short_count);
    for (double x : e.excesses) CHECK(x > 0.0);
}

TEST_CASE("empirical_quantile uses the ceil(ks)-th order statistic") {
    const BlockMaximaSample b = make_block_sample({6, 4, 5}, 1);
    CHECK(empirical_quantile(b, 0.5, 1.0, 0.0) == 5);          // ceil(1.5) = 2nd
    CHECK(empirical_quantile(b, 0.25, 1.0, 0.0) == 4);         // s = 1/(k+1) -> first
    CHECK(empirical_quantile(b, 0.5, 2.0, 4.0) == 0.5);        // normalization
    double prev = empirical_quantile(b, 0.01, 1.0, 0.0);
    for (double s = 0.05; s < 1.0; s += 0.01) {
        const double cur = empirical_quantile(b, s, 1.0, 0.0);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK_THROWS_AS(empirical_quantile(b, 0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(empirical_quantile(b, 0.5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("read_series accepts one value per line with # comments") {
    std::istringstream in("# header\n1.5\n  2.25\n-3e2\n# trailing comment\n7\n");
    const RawSeries s = read_series(in);
    CHECK(s.values == std::vector<double>{1.5, 2.25, -300, 7});
}

TEST_CASE("read_series hard errors carry the line number") {
    {
        std::istringstream in("1\n2\nnot-a-number\n4\n");
        CHECK_THROWS_WITH_AS(read_series(in), doctest::Contains("line 3"), ParseError);
    }
    {
        std::istringstream in("1\n\n3\n");
        try {
            read_series(in);
            CHECK(false);
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
    {
        std::istringstream in("1\nnan\n");
        CHECK_THROWS_AS(read_series(in), ParseError);
    }
    {
        std::istringstream in("1.5 2.5\n");
        CHECK_THROWS_AS(read_series(in), ParseError);  // two values on one line
    }
    {
        std::istringstream in("# only comments\n");
        CHECK_THROWS_AS(read_series(in), ParseError);
    }
}

TEST_SUITE_END();
