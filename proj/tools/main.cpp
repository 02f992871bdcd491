#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sparsechan/analysis.hpp"
#include "sparsechan/config.hpp"
#include "sparsechan/csv.hpp"
#include "sparsechan/errors.hpp"
#include "sparsechan/sweep.hpp"

namespace {

using namespace sparsechan;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

// lo:hi:step range of delay spreads for lambda-fit.
std::vector<int> parse_range(const std::string& s) {
    int lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::stringstream ss(s);
    if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 ||
        hi < lo)
        throw ConfigError("expected --n-range lo:hi:step with step > 0, got '" + s + "'");
    std::vector<int> out;
    for (int v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

ExperimentConfig config_for(const std::string& path, const std::optional<std::uint64_t>& seed) {
    ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
}

int run_command(const std::string& config_path, const std::string& out_path,
                const std::optional<std::uint64_t>& seed) {
    const ExperimentConfig cfg = config_for(config_path, seed);
    emit_csv(run_sweep(cfg), out_path);
    return 0;
}

int oracle_p_command(const std::string& config_path, const std::string& out_path,
                     const std::string& p_grid_arg, const std::optional<std::uint64_t>& seed) {
    const ExperimentConfig cfg = config_for(config_path, seed);
    std::vector<double> grid =
        p_grid_arg.empty() ? kDefaultPGrid : parse_double_list(p_grid_arg);
    emit_csv(oracle_p_search(cfg, grid), out_path);
    return 0;
}

int lambda_fit_command(int m, const std::string& n_range, int trials, std::uint64_t seed,
                       const std::string& out_path) {
    RngStream rng(seed);
    std::vector<LambdaFitPoint> points;
    const EigFit fit =
        lambda_fit(m, parse_range(n_range), KRule::half_n(), trials, rng, points);
    emit_lambda_csv(points, fit, out_path);
    return 0;
}

int power_check_command(int m, int n, int s, int trials, std::uint64_t seed,
                        const std::string& out_path) {
    RngStream rng(seed);
    const PowerCheckReport rep = power_montecarlo(m, n, s, trials, rng);
    emit_power_csv(m, n, s, rep, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sparse channel estimation toolkit\n"
        "SNR convention: sigma = sqrt(P / 10^(snr_db/10)) where P is the average\n"
        "per-sample power of the noiseless received signal, ||C h||^2 / (M+N-1)."};
    app.require_subcommand(1);

    std::string config_path, out_path, p_grid, n_range;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed = 20080301;
    int m = 200, n = 100, s = 3, trials = 20;

    auto* run = app.add_subcommand(
        "run", "Monte Carlo estimator sweep over SNR; emits the result table as CSV");
    run->add_option("--config", config_path, "key = value config file (defaults when omitted)");
    run->add_option("--out", out_path, "output CSV path")->required();
    run->add_option("--seed", seed_override, "override the config seed");

    auto* oraclep = app.add_subcommand(
        "oracle-p", "per-SNR sweep of the threshold divisor P (zero-start recovery)");
    oraclep->add_option("--config", config_path, "key = value config file");
    oraclep->add_option("--out", out_path, "output CSV path")->required();
    oraclep->add_option("--p-grid", p_grid, "comma list of divisors (default 1..10,4.6)");
    oraclep->add_option("--seed", seed_override, "override the config seed");

    auto* lam = app.add_subcommand(
        "lambda-fit", "mean top gram eigenvalue of normalized (N/2)x(M+N-1) Rademacher "
                      "matrices over a range of N, plus the fitted line");
    lam->add_option("--m", m, "training sequence length")->required();
    lam->add_option("--n-range", n_range, "delay spreads as lo:hi:step")->required();
    lam->add_option("--trials", trials, "matrices averaged per N (default 20)")
        ->default_val(20);
    lam->add_option("--seed", seed, "random seed");
    lam->add_option("--out", out_path, "output CSV path")->required();

    auto* pow = app.add_subcommand(
        "power-check", "Monte Carlo rate of ||C h||^2 <= (M+N-1)/M over fresh (c, h) draws");
    pow->add_option("--m", m, "training sequence length")->required();
    pow->add_option("--n", n, "delay spread")->required();
    pow->add_option("--s", s, "sparsity")->required();
    pow->add_option("--trials", trials, "number of draws")->required();
    pow->add_option("--seed", seed, "random seed");
    pow->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return run_command(config_path, out_path, seed_override);
        if (oraclep->parsed())
            return oracle_p_command(config_path, out_path, p_grid, seed_override);
        if (lam->parsed()) return lambda_fit_command(m, n_range, trials, seed, out_path);
        if (pow->parsed()) return power_check_command(m, n, s, trials, seed, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
