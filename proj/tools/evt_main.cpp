// Command line front end: fit estimators on data files, print asymptotic
// quantities, build comparison grids, run Monte Carlo studies.
//
// Exit codes: 0 success, 1 usage or input errors, 2 numerical non-convergence
// (a report is still written).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "evt/compare.hpp"
#include "evt/estimators.hpp"
#include "evt/montecarlo.hpp"
#include "evt/report.hpp"

namespace {

struct OutputTarget {
    std::string path;  // empty = stdout

    void write(const std::string& content) const {
        if (path.empty()) {
            std::cout << content;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << content;
    }
};

std::pair<double, double> parse_range(const std::string& text, const char* what) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError(std::string(what) + ": expected lo:hi, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(std::string(what) + ": expected lo:hi, got '" + text + "'");
    }
}

std::pair<int, int> parse_steps(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(std::string("--steps: expected N or NG:NR, got '") + text +
                                   "'");
    }
}

int run_fit(const std::string& input, const std::string& method, std::size_t block_size,
            std::size_t top_k, const std::string& format, const OutputTarget& out) {
    const evt::RawSeries series = evt::read_series_file(input);
    const evt::EstimatorKind kind = evt::estimator_kind_from_string(method);
    const bool pot = kind == evt::EstimatorKind::pot_mle || kind == evt::EstimatorKind::pot_pwm;
    if (pot && top_k == 0) throw std::runtime_error("POT methods require --top-k");
    if (!pot && block_size == 0) throw std::runtime_error("BM methods require --block-size");

    evt::FitMeta meta;
    meta.method = method;
    meta.input = input;
    meta.n = series.size();

    std::string report;
    bool converged = false;
    if (pot) {
        const evt::ExcessSample sample = evt::excesses_over_top_k(series, top_k);
        meta.top_k = top_k;
        meta.threshold = sample.threshold;
        meta.k = sample.excesses.size();
        meta.short_count = sample.short_count;
        if (sample.short_count)
            std::cerr << "warning: ties at the threshold reduced the excess count to " << meta.k
                      << "\n";
        const evt::GpdFit fit = kind == evt::EstimatorKind::pot_mle ? evt::fit_pot_mle(sample)
                                                                    : evt::fit_pot_pwm(sample);
        converged = fit.diag.converged;
        report = format == "csv" ? evt::fit_report_csv(fit, meta) : evt::fit_report_json(fit, meta);
    } else {
        const evt::BlockMaximaSample sample = evt::block_maxima(series, block_size);
        meta.block_size = block_size;
        meta.k = sample.num_blocks;
        const evt::GevFit fit = kind == evt::EstimatorKind::bm_mle ? evt::fit_bm_mle(sample)
                                                                   : evt::fit_bm_pwm(sample);
        converged = fit.diag.converged;
        report = format == "csv" ? evt::fit_report_csv(fit, meta) : evt::fit_report_json(fit, meta);
    }
    out.write(report);
    if (!converged) {
        std::cerr << "fit did not converge; see the report diagnostics\n";
        return 2;
    }
    return 0;
}

int run_compare(const std::string& pair, const std::string& gamma_range,
                const std::string& rho_range, const std::string& steps,
                const OutputTarget& out) {
    const auto gr = parse_range(gamma_range, "--gamma-range");
    const auto rr = parse_range(rho_range, "--rho-range");
    const auto st = parse_steps(steps);
    std::ostringstream os;
    if (pair == "mle" || pair == "pwm") {
        const auto a = pair == "mle" ? evt::EstimatorKind::pot_mle : evt::EstimatorKind::pot_pwm;
        const auto b = pair == "mle" ? evt::EstimatorKind::bm_mle : evt::EstimatorKind::bm_pwm;
        evt::write_grid_csv(evt::build_grid(a, b, gr, rr, st), os);
    } else if (pair == "all") {
        const auto mle =
            evt::build_grid(evt::EstimatorKind::pot_mle, evt::EstimatorKind::bm_mle, gr, rr, st);
        const auto pwm =
            evt::build_grid(evt::EstimatorKind::pot_pwm, evt::EstimatorKind::bm_pwm, gr, rr, st);
        os << "gamma,rho,var_bm_mle,var_pot_mle,var_bm_pwm,var_pot_pwm,"
              "bias_bm_mle,bias_pot_mle,bias_bm_pwm,bias_pot_pwm,"
              "amse_ratio_mle,amse_ratio_pwm,k0_ratio_mle,k0_ratio_pwm\n";
        for (std::size_t i = 0; i < mle.cells.size(); ++i) {
            const auto& cm = mle.cells[i];
            const auto& cp = pwm.cells[i];
            auto opt = [](double v) { return std::isfinite(v) ? evt::format_double(v) : ""; };
            os << evt::format_double(cm.gamma) << ',' << evt::format_double(cm.rho) << ','
               << evt::format_double(cm.var_b) << ',' << evt::format_double(cm.var_a) << ','
               << evt::format_double(cp.var_b) << ',' << evt::format_double(cp.var_a) << ','
               << evt::format_double(cm.bias_b) << ',' << evt::format_double(cm.bias_a) << ','
               << evt::format_double(cp.bias_b) << ',' << evt::format_double(cp.bias_a) << ','
               << opt(cm.amse_ratio) << ',' << opt(cp.amse_ratio) << ',' << opt(cm.k0_ratio)
               << ',' << opt(cp.k0_ratio) << "\n";
        }
    } else {
        throw std::runtime_error("--pair must be one of mle, pwm, all");
    }
    out.write(os.str());
    return 0;
}

int run_simulate(const std::string& dist_name, double gamma0, double rho, std::size_t k,
                 std::size_t m, int replications, const std::string& estimator,
                 std::uint64_t seed, int threads, const OutputTarget& out) {
    evt::TestDistribution dist;
    try {
        dist = evt::make_catalog_dist(dist_name, gamma0, rho);
    } catch (const std::invalid_argument&) {
        std::ostringstream msg;
        msg << "unknown catalog distribution '" << dist_name << "'; available:";
        for (const auto& n : evt::catalog_names()) msg << ' ' << n;
        throw std::runtime_error(msg.str());
    }
    evt::McConfig config;
    config.replications = replications;
    config.num_blocks = k;
    config.block_size = m;
    config.seed = seed;
    config.parallelism = threads;
    const evt::McSummary summary =
        evt::run_study(dist, config, evt::estimator_kind_from_string(estimator));
    out.write(evt::mc_summary_json(summary));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-maxima and peaks-over-threshold estimation of the extreme value index,"
                 " with the asymptotic variance/bias calculus and a Monte Carlo harness"};
    app.require_subcommand(1);

    OutputTarget out;

    // fit
    auto* fit = app.add_subcommand("fit", "Fit an estimator to a data file");
    std::string fit_input, fit_method, fit_format = "json";
    std::size_t fit_block = 0, fit_topk = 0;
    fit->add_option("--input,-i", fit_input, "input file, one value per line")->required();
    fit->add_option("--method", fit_method, "bm-mle | bm-pwm | pot-mle | pot-pwm")->required();
    auto* bs = fit->add_option("--block-size", fit_block, "block length m (BM methods)");
    auto* tk = fit->add_option("--top-k", fit_topk, "number of top order statistics (POT)");
    bs->excludes(tk);
    fit->add_option("--format", fit_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    fit->add_option("--output,-o", out.path, "output path (default stdout)");

    // asym
    auto* asym = app.add_subcommand("asym", "Print the asymptotic law of the BM-MLE");
    double as_gamma0 = 0.0, as_rho = 0.0, as_lambda = 0.0;
    bool as_numeric = false;
    asym->add_option("--gamma0", as_gamma0, "extreme value index, > -1/2")->required();
    asym->add_option("--rho", as_rho, "second-order index, <= 0");
    asym->add_option("--lambda", as_lambda, "asymptotic bias scale");
    asym->add_flag("--numeric", as_numeric, "force the quadrature route");
    asym->add_option("--output,-o", out.path, "output path (default stdout)");

    // compare
    auto* cmp = app.add_subcommand("compare", "Emit a POT/BM comparison grid as CSV");
    std::string cmp_pair = "mle", cmp_gr = "-0.45:0.45", cmp_rr = "-1:-0.05",
                cmp_steps = "91:20";
    cmp->add_option("--pair", cmp_pair, "mle | pwm | all");
    cmp->add_option("--gamma-range", cmp_gr, "lo:hi");
    cmp->add_option("--rho-range", cmp_rr, "lo:hi (within [-1, 0])");
    cmp->add_option("--steps", cmp_steps, "grid points per axis, N or NG:NR");
    cmp->add_option("--output,-o", out.path, "output path (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo study of an estimator's local law");
    std::string sim_dist = "exact-gev", sim_estimator = "bm-mle";
    double sim_gamma0 = 0.25, sim_rho = -1.0;
    std::size_t sim_k = 1000, sim_m = 1;
    int sim_r = 1000, sim_threads = 1;
    std::uint64_t sim_seed = 0;
    sim->add_option("--dist", sim_dist, "exact-gev | hall | frechet | exact-gpd");
    sim->add_option("--gamma0", sim_gamma0, "index of the sampled model");
    sim->add_option("--rho", sim_rho, "second-order index (hall)");
    sim->add_option("--k", sim_k, "blocks / excesses per replication");
    sim->add_option("--m", sim_m, "block size");
    sim->add_option("--replications", sim_r, "number of replications");
    sim->add_option("--estimator", sim_estimator, "bm-mle | bm-pwm | pot-mle | pot-pwm");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--threads", sim_threads, "worker threads");
    sim->add_option("--output,-o", out.path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (fit->parsed())
            return run_fit(fit_input, fit_method, fit_block, fit_topk, fit_format, out);
        if (asym->parsed()) {
            out.write(evt::asym_report_json({as_gamma0, as_rho, as_lambda}, as_numeric));
            return 0;
        }
        if (cmp->parsed()) return run_compare(cmp_pair, cmp_gr, cmp_rr, cmp_steps, out);
        if (sim->parsed())
            return run_simulate(sim_dist, sim_gamma0, sim_rho, sim_k, sim_m, sim_r, sim_estimator,
                                sim_seed, sim_threads, out);
    } catch (const evt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
