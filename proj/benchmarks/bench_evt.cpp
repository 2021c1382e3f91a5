#include <benchmark/benchmark.h>

#include "evt/asymptotics.hpp"
#include "evt/estimators.hpp"
#include "evt/gev.hpp"
#include "evt/montecarlo.hpp"

namespace {

void bm_gev_chain(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        auto c = evt::detail::gev_chain(0.25, x);
        benchmark::DoNotOptimize(c.ggg);
        x = x < 3.0 ? x + 1e-7 : 0.1;
    }
}
BENCHMARK(bm_gev_chain);

void bm_score_hessian(benchmark::State& state) {
    const evt::GevParams th{0.25, 0.0, 1.0};
    double x = 0.3;
    for (auto _ : state) {
        auto s = evt::score(th, x);
        auto h = evt::hessian(th, x);
        benchmark::DoNotOptimize(s[0]);
        benchmark::DoNotOptimize(h(2, 2));
        x = x < 3.0 ? x + 1e-7 : 0.3;
    }
}
BENCHMARK(bm_score_hessian);

void bm_fisher_info_numeric(benchmark::State& state) {
    for (auto _ : state) {
        auto m = evt::fisher_info_numeric(0.25);
        benchmark::DoNotOptimize(m(0, 0));
    }
}
BENCHMARK(bm_fisher_info_numeric);

void bm_bias_vector_numeric(benchmark::State& state) {
    for (auto _ : state) {
        auto b = evt::bias_vector_numeric(0.25, -0.5);
        benchmark::DoNotOptimize(b.b_gamma);
    }
}
BENCHMARK(bm_bias_vector_numeric);

void bm_pwm_variance(benchmark::State& state) {
    double g = -0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evt::registry::bm_pwm_var(g));
        g = g < 0.4 ? g + 0.01 : -0.2;
    }
}
BENCHMARK(bm_pwm_variance);

void bm_fit_bm_mle(benchmark::State& state) {
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    const auto sample = evt::sample_exact_gev(0.25, k, 7, 0);
    for (auto _ : state) {
        auto fit = evt::fit_bm_mle(sample);
        benchmark::DoNotOptimize(fit.params.gamma);
    }
    state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(bm_fit_bm_mle)->Arg(1000)->Arg(10000);

void bm_fit_bm_pwm(benchmark::State& state) {
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    const auto sample = evt::sample_exact_gev(0.25, k, 7, 0);
    for (auto _ : state) {
        auto fit = evt::fit_bm_pwm(sample);
        benchmark::DoNotOptimize(fit.params.gamma);
    }
    state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(bm_fit_bm_pwm)->Arg(1000)->Arg(10000);

void bm_sample_block_maxima(benchmark::State& state) {
    const auto dist = evt::hall_dist(0.25, -1.0, -4.0);
    std::uint64_t stream = 0;
    for (auto _ : state) {
        auto s = evt::sample_domain_of_attraction(dist, 1000, 100, 11, stream++);
        benchmark::DoNotOptimize(s.maxima.back());
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_sample_block_maxima);

}  // namespace

BENCHMARK_MAIN();
