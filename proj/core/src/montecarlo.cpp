#include "evt/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "evt/detail/stable.hpp"
#include "evt/estimators.hpp"
#include "evt/gpd.hpp"
#include "evt/rng.hpp"

namespace evt {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

TestDistribution exact_gev_dist(double gamma0) {
    TestDistribution d;
    d.name = "exact-gev";
    d.gamma0 = gamma0;
    d.rho = 0.0;
    d.a_fn = [gamma0](double m) { return std::pow(m, gamma0); };
    d.b_fn = [gamma0](double m) { return detail::powm1_over(m, gamma0); };
    d.A_fn = [](double) { return 0.0; };
    d.raw_quantile = [gamma0](double u) { return quantile(gamma0, u); };
    d.blockmax_quantile = [gamma0](double u, double m) {
        return detail::powm1_over(m, gamma0) + std::pow(m, gamma0) * quantile(gamma0, u);
    };
    return d;
}

TestDistribution hall_dist(double gamma0, double rho, double dcoef) {
    if (!(rho < 0.0)) throw std::invalid_argument("hall_dist: require rho < 0");
    if (dcoef == 0.0) throw std::invalid_argument("hall_dist: require d != 0");
    const double t0 = dcoef < 0.0 ? std::pow(-1.0 / dcoef, 1.0 / rho) : 0.0;
    auto v_fn = [gamma0, rho, dcoef, t0](double t) {
        const double tc = t < t0 ? t0 : t;
        return detail::powm1_over(tc, gamma0) + dcoef * detail::powm1_over(tc, gamma0 + rho);
    };
    TestDistribution d;
    d.name = "hall";
    d.gamma0 = gamma0;
    d.rho = rho;
    d.a_fn = [gamma0, rho, dcoef](double m) {
        return std::pow(m, gamma0) * (1.0 + dcoef * std::pow(m, rho));
    };
    d.b_fn = v_fn;
    d.A_fn = [rho, dcoef](double m) { return dcoef * rho * std::pow(m, rho); };
    d.raw_quantile = [v_fn](double u) { return v_fn(-1.0 / std::log(u)); };
    d.blockmax_quantile = [v_fn](double u, double m) { return v_fn(-m / std::log(u)); };
    return d;
}

TestDistribution frechet_dist() {
    TestDistribution d;
    d.name = "frechet";
    d.gamma0 = 1.0;
    d.rho = 0.0;
    d.a_fn = [](double m) { return m; };
    d.b_fn = [](double m) { return m; };
    d.A_fn = [](double) { return 0.0; };
    d.raw_quantile = [](double u) { return -1.0 / std::log(u); };
    d.blockmax_quantile = [](double u, double m) { return -m / std::log(u); };
    return d;
}

TestDistribution exact_gpd_dist(double gamma0) {
    TestDistribution d;
    d.name = "exact-gpd";
    d.gamma0 = gamma0;
    d.rho = 0.0;
    d.a_fn = [](double) { return 1.0; };
    d.b_fn = [](double) { return 0.0; };
    d.A_fn = [](double) { return 0.0; };
    d.raw_quantile = [gamma0](double u) { return gpd_quantile({gamma0, 1.0}, u); };
    d.excess_model = true;
    return d;
}

TestDistribution make_catalog_dist(const std::string& name, double gamma0, double rho) {
    if (name == "exact-gev") return exact_gev_dist(gamma0);
    if (name == "hall") return hall_dist(gamma0, rho == 0.0 ? -1.0 : rho, -4.0);
    if (name == "frechet") return frechet_dist();
    if (name == "exact-gpd") return exact_gpd_dist(gamma0);
    throw std::invalid_argument("unknown catalog distribution: " + name);
}

std::vector<std::string> catalog_names() { return {"exact-gev", "hall", "frechet", "exact-gpd"}; }

BlockMaximaSample sample_exact_gev(double gamma0, std::size_t k, std::uint64_t seed,
                                   std::uint64_t stream) {
    CounterRng rng(seed, stream);
    std::vector<double> xs(k);
    for (std::size_t i = 0; i < k; ++i) xs[i] = quantile(gamma0, rng.uniform_open01());
    return make_block_sample(std::move(xs), 1);
}

BlockMaximaSample sample_domain_of_attraction(const TestDistribution& dist, std::size_t k,
                                              std::size_t m, std::uint64_t seed,
                                              std::uint64_t stream, bool use_shortcut) {
    if (m < 1) throw std::invalid_argument("sample_domain_of_attraction: require m >= 1");
    CounterRng rng(seed, stream);
    std::vector<double> xs(k);
    if (use_shortcut && dist.blockmax_quantile) {
        for (std::size_t i = 0; i < k; ++i)
            xs[i] = dist.blockmax_quantile(rng.uniform_open01(), static_cast<double>(m));
    } else {
        for (std::size_t i = 0; i < k; ++i) {
            double mx = dist.raw_quantile(rng.uniform_open01());
            for (std::size_t j = 1; j < m; ++j)
                mx = std::max(mx, dist.raw_quantile(rng.uniform_open01()));
            xs[i] = mx;
        }
    }
    return make_block_sample(std::move(xs), m);
}

namespace {

bool is_pot(EstimatorKind kind) {
    return kind == EstimatorKind::pot_mle || kind == EstimatorKind::pot_pwm;
}

struct RepResult {
    bool ok = false;
    double err[3] = {kNan, kNan, kNan};
};

}  // namespace

McSummary run_study(const TestDistribution& dist, const McConfig& config, EstimatorKind kind) {
    if (config.replications < 1) throw std::invalid_argument("run_study: require R >= 1");
    if (config.num_blocks < 2) throw std::invalid_argument("run_study: require k >= 2");
    if (is_pot(kind) != dist.excess_model)
        throw std::invalid_argument("run_study: estimator does not match the sampling model");
    if (!dist.excess_model && config.block_size < 1)
        throw std::invalid_argument("run_study: require block_size >= 1");
    const bool pwm_kind = kind == EstimatorKind::bm_pwm || kind == EstimatorKind::pot_pwm;
    if (pwm_kind && !(dist.gamma0 < 0.5))
        throw std::invalid_argument("run_study: PWM estimators need gamma0 < 1/2");
    if (!pwm_kind && !(dist.gamma0 > -0.5))
        throw std::invalid_argument("run_study: MLE needs gamma0 > -1/2");

    const std::size_t k = config.num_blocks;
    const std::size_t m = config.block_size;
    const double md = static_cast<double>(m);
    const double am = dist.a_fn ? dist.a_fn(md) : 1.0;
    const double bm = dist.b_fn ? dist.b_fn(md) : 0.0;
    const double rate = dist.A_fn ? dist.A_fn(md) : 0.0;
    if (!(am > 0.0))
        throw std::invalid_argument("run_study: a(m) must be positive (block size too small?)");
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    const int dim = dist.excess_model ? 2 : 3;

    std::vector<RepResult> results(config.replications);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= config.replications) return;
            RepResult& out = results[rep];
            const std::uint64_t stream = static_cast<std::uint64_t>(rep);
            try {
                if (dist.excess_model) {
                    CounterRng rng(config.seed, stream);
                    std::vector<double> ys(k);
                    for (std::size_t i = 0; i < k; ++i)
                        ys[i] = dist.raw_quantile(rng.uniform_open01());
                    const ExcessSample sample = make_excess_sample(std::move(ys));
                    const GpdFit fit = kind == EstimatorKind::pot_mle ? fit_pot_mle(sample)
                                                                      : fit_pot_pwm(sample);
                    if (fit.diag.converged) {
                        out.ok = true;
                        out.err[0] = sqrt_k * (fit.params.gamma - dist.gamma0);
                        out.err[1] = sqrt_k * (fit.params.sigma - 1.0);
                    }
                } else {
                    BlockMaximaSample sample =
                        sample_domain_of_attraction(dist, k, m, config.seed, stream);
                    // normalize by the true constants; estimator equivariance
                    // maps the fit back and forth exactly
                    for (double& v : sample.maxima) v = (v - bm) / am;
                    for (double& v : sample.sorted_maxima) v = (v - bm) / am;
                    const GevFit fit = kind == EstimatorKind::bm_mle ? fit_bm_mle(sample)
                                                                     : fit_bm_pwm(sample);
                    if (fit.diag.converged) {
                        out.ok = true;
                        out.err[0] = sqrt_k * (fit.params.gamma - dist.gamma0);
                        out.err[1] = sqrt_k * fit.params.mu;
                        out.err[2] = sqrt_k * (fit.params.sigma - 1.0);
                    }
                }
            } catch (const std::exception&) {
                out.ok = false;
            }
        }
    };

    const int threads = std::max(1, config.parallelism);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    McSummary s;
    s.dist_name = dist.name;
    s.estimator = kind;
    s.gamma0 = dist.gamma0;
    s.rho = dist.rho;
    s.lambda_hat = sqrt_k * rate;
    s.k = k;
    s.m = m;
    s.replications = config.replications;
    s.seed = config.seed;
    s.components = dist.excess_model
                       ? std::vector<std::string>{"gamma", "sigma"}
                       : std::vector<std::string>{"gamma", "mu", "sigma"};

    s.mean.assign(dim, 0.0);
    s.mc_se.assign(dim, kNan);
    s.cov.assign(dim, std::vector<double>(dim, kNan));
    // reduction in replication order, independent of scheduling
    for (const auto& r : results)
        if (r.ok) ++s.n_converged;
    s.convergence_rate = static_cast<double>(s.n_converged) / config.replications;
    if (s.n_converged > 0) {
        for (const auto& r : results)
            if (r.ok)
                for (int i = 0; i < dim; ++i) s.mean[i] += r.err[i];
        for (int i = 0; i < dim; ++i) s.mean[i] /= s.n_converged;
        if (s.n_converged > 1) {
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) s.cov[i][j] = 0.0;
            for (const auto& r : results)
                if (r.ok)
                    for (int i = 0; i < dim; ++i)
                        for (int j = 0; j < dim; ++j)
                            s.cov[i][j] += (r.err[i] - s.mean[i]) * (r.err[j] - s.mean[j]);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) s.cov[i][j] /= (s.n_converged - 1);
            for (int i = 0; i < dim; ++i) s.mc_se[i] = std::sqrt(s.cov[i][i] / s.n_converged);
        }
    }

    // comparison targets
    s.target_mean.assign(dim, kNan);
    s.target_cov.assign(dim, std::vector<double>(dim, kNan));
    const SecondOrderSpec so{dist.gamma0, s.lambda_hat == 0.0 ? std::min(dist.rho, 0.0) : dist.rho,
                             s.lambda_hat};
    if (kind == EstimatorKind::bm_mle) {
        const MleBmAsym asym = mle_bm_asym(so);
        for (int i = 0; i < 3; ++i) {
            s.target_mean[i] = asym.full_bias[i];
            for (int j = 0; j < 3; ++j) s.target_cov[i][j] = asym.full_cov(i, j);
        }
    } else {
        const AsymMoments a = estimator_asym(kind, so);
        s.target_mean[0] = a.bias;
        s.target_cov[0][0] = a.variance;
    }
    return s;
}

}  // namespace evt
