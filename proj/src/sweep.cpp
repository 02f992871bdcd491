#include "sparsechan/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sparsechan/analysis.hpp"
#include "sparsechan/errors.hpp"
#include "sparsechan/estimators.hpp"

namespace sparsechan {

namespace {

constexpr std::uint64_t kFitTag = 0xF17F17;
constexpr int kFitTrialsPerN = 8;
// Tight fixed-point tolerance so that recoveries sharing a support land on
// numerically indistinguishable estimates (the PEA-CS selection relies on
// spotting those duplicates).
constexpr double kSweepFixpointTol = 1e-10;

struct TrialData {
    ConvolutionBasis basis;
    SparseChannel channel;
    MeasurementMatrix phi;
    EffectiveMatrix a;
    double sigma = 0.0;
    ReceivedSignal r;
    Vector y;
    double lambda_hat = 0.0;
    Estimate initial;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
};

// One fresh (c, h, Phi, noise) tuple from per-(snr, trial) substreams. The
// draws depend only on (seed, snr index, trial index), never on the
// estimator list.
TrialData make_trial(const ExperimentConfig& cfg, const RngStream& root, std::size_t snr_index,
                     int trial, double snr_db, double snr_min, double snr_max) {
    RngStream base = root.fork(snr_index, static_cast<std::uint64_t>(trial));
    RngStream c_rng = base.fork(0);
    RngStream h_rng = base.fork(1);
    RngStream phi_rng = base.fork(2);
    RngStream noise_rng = base.fork(3);

    TrialData td;
    const TrainingSequence c = gen_training(cfg.m, c_rng);
    td.basis = build_convolution(c, cfg.n, /*normalize=*/true);
    td.channel = gen_sparse_channel(cfg.n, cfg.s, AmplitudeLaw::kUniform, h_rng);
    td.phi = gen_measurement(cfg.k, cfg.m + cfg.n - 1, phi_rng);
    td.a = effective(td.phi, td.basis);
    td.sigma = snr_to_sigma(snr_db, td.basis, td.channel);
    td.r = transmit(td.basis, td.channel, td.sigma, noise_rng);
    td.y = project(td.phi, td.r);
    // Safety factor keeps the step bound valid even though the power
    // iteration approaches the top eigenvalue from below.
    td.lambda_hat = spectral_top(td.a.m) * (1.0 + 1e-8);
    td.initial = sliding_correlator(td.basis, td.r);
    td.sigma_lo = snr_to_sigma(snr_max, td.basis, td.channel);
    td.sigma_hi = snr_to_sigma(snr_min, td.basis, td.channel);
    return td;
}

ThresholdModel calibrated_model(const ExperimentConfig& cfg, const RngStream& root) {
    RngStream fit_rng = root.fork(kFitTag);
    const EigFit fit =
        lambda_fit(cfg.m, default_fit_range(cfg.n), KRule::half_n(), kFitTrialsPerN, fit_rng);
    return calibrate_threshold_model(cfg.m, cfg.n, fit);
}

HNConfig base_hn_config(const ExperimentConfig& cfg, const TrialData& td) {
    HNConfig hn;
    hn.amplitude_bound = 1.0 / std::sqrt(static_cast<double>(cfg.m));
    hn.sigma = td.sigma;
    hn.lambda = td.lambda_hat;
    hn.fixpoint_tol = kSweepFixpointTol;
    return hn;
}

struct Accumulator {
    double sum = 0.0;
    int successes = 0;
    int failures = 0;

    void success(double v) {
        sum += v;
        ++successes;
    }
    double mean() const {
        return successes > 0 ? sum / successes : std::numeric_limits<double>::quiet_NaN();
    }
};

std::string format_p(double p) {
    std::ostringstream os;
    os << "P=" << p;
    return os.str();
}

} // namespace

std::vector<int> default_fit_range(int n) {
    const int lo = std::max(2, n / 2);
    const int hi = std::max(lo + 4, (3 * n) / 2);
    std::vector<int> values;
    for (int i = 0; i < 5; ++i) {
        const int v = lo + (hi - lo) * i / 4;
        if (values.empty() || values.back() != v) values.push_back(v);
    }
    return values;
}

ResultTable run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    RngStream root(cfg.seed);
    const ThresholdModel model = calibrated_model(cfg, root);
    const double snr_min = *std::min_element(cfg.snr_db_list.begin(), cfg.snr_db_list.end());
    const double snr_max = *std::max_element(cfg.snr_db_list.begin(), cfg.snr_db_list.end());

    ResultTable table;
    for (std::size_t si = 0; si < cfg.snr_db_list.size(); ++si) {
        const double snr = cfg.snr_db_list[si];
        std::map<std::string, Accumulator> acc;
        std::map<int, int> pea_hist;
        std::vector<Accumulator> oracle_acc(kDefaultPGrid.size());
        double crb_u_sum = 0.0;
        double crb_s_sum = 0.0;

        for (int ti = 0; ti < cfg.trials; ++ti) {
            const TrialData td = make_trial(cfg, root, si, ti, snr, snr_min, snr_max);
            const CrbReport crb = crb_report(td.basis, td.sigma, td.channel.support);
            crb_u_sum += crb.crb_u;
            crb_s_sum += crb.crb_s;
            const HNConfig hn = base_hn_config(cfg, td);

            for (const auto& id : cfg.estimators) {
                try {
                    if (id == "sliding") {
                        acc[id].success(mse(td.initial, td.channel));
                    } else if (id == "max_energy") {
                        acc[id].success(mse(max_energy(td.a, td.y), td.channel));
                    } else if (id == "mp") {
                        acc[id].success(
                            mse(matching_pursuit(td.basis.m, td.r.samples, cfg.s), td.channel));
                    } else if (id == "ds") {
                        acc[id].success(
                            mse(dantzig_selector(td.a.m, td.y, cfg.gamma), td.channel));
                    } else if (id == "pea_cs") {
                        const ThresholdSet ts =
                            threshold_set(td.initial, model, td.sigma_lo, td.sigma_hi, cfg.n_t);
                        auto [est, trace] = pea_cs(td.a.m, td.y, ts, hn, td.initial.h_hat);
                        acc[id].success(mse(est, td.channel));
                        ++pea_hist[trace.chosen_index];
                    } else if (id == "hn_fixed_p") {
                        HNConfig fixed = hn;
                        fixed.divisor_p = cfg.p_value;
                        acc[id].success(mse(hn_recover(td.a.m, td.y, model.g(td.sigma), fixed,
                                                       td.initial.h_hat),
                                            td.channel));
                    } else if (id == "hn_oracle_p") {
                        for (std::size_t pi = 0; pi < kDefaultPGrid.size(); ++pi) {
                            HNConfig per_p = hn;
                            per_p.divisor_p = kDefaultPGrid[pi];
                            try {
                                oracle_acc[pi].success(
                                    mse(hn_recover(td.a.m, td.y, model.g(td.sigma), per_p,
                                                   td.initial.h_hat),
                                        td.channel));
                            } catch (const std::exception&) {
                                ++oracle_acc[pi].failures;
                            }
                        }
                    }
                } catch (const std::exception&) {
                    ++acc[id].failures;
                }
            }
        }

        for (const auto& id : cfg.estimators) {
            ResultRow row;
            row.snr_db = snr;
            row.estimator = id;
            row.trials = cfg.trials;
            row.crb_u = crb_u_sum / cfg.trials;
            row.crb_s = crb_s_sum / cfg.trials;
            if (id == "hn_oracle_p") {
                std::size_t best = 0;
                double best_mean = std::numeric_limits<double>::infinity();
                for (std::size_t pi = 0; pi < kDefaultPGrid.size(); ++pi) {
                    const double m = oracle_acc[pi].mean();
                    if (oracle_acc[pi].successes > 0 && m < best_mean) {
                        best_mean = m;
                        best = pi;
                    }
                }
                row.mean_mse = oracle_acc[best].mean();
                row.failures = oracle_acc[best].failures;
                row.extra = format_p(kDefaultPGrid[best]);
            } else {
                row.mean_mse = acc[id].mean();
                row.failures = acc[id].failures;
                if (id == "pea_cs") {
                    std::ostringstream os;
                    bool first = true;
                    for (const auto& [idx, count] : pea_hist) {
                        if (!first) os << ';';
                        os << idx << ':' << count;
                        first = false;
                    }
                    row.extra = os.str();
                } else if (id == "hn_fixed_p") {
                    row.extra = format_p(cfg.p_value);
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

OraclePTable oracle_p_search(const ExperimentConfig& cfg, const std::vector<double>& p_grid) {
    cfg.validate();
    if (p_grid.empty()) throw DomainError("oracle_p_search: empty divisor grid");
    for (const double p : p_grid)
        if (p <= 0.0) throw DomainError("oracle_p_search: divisors must be positive");

    RngStream root(cfg.seed);
    const ThresholdModel model = calibrated_model(cfg, root);
    const double snr_min = *std::min_element(cfg.snr_db_list.begin(), cfg.snr_db_list.end());
    const double snr_max = *std::max_element(cfg.snr_db_list.begin(), cfg.snr_db_list.end());

    OraclePTable table;
    for (std::size_t si = 0; si < cfg.snr_db_list.size(); ++si) {
        const double snr = cfg.snr_db_list[si];
        std::vector<Accumulator> acc(p_grid.size());
        for (int ti = 0; ti < cfg.trials; ++ti) {
            const TrialData td = make_trial(cfg, root, si, ti, snr, snr_min, snr_max);
            const HNConfig hn = base_hn_config(cfg, td);
            const double g = model.g(td.sigma);
            for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
                HNConfig per_p = hn;
                per_p.divisor_p = p_grid[pi];
                try {
                    // The original divisor experiment: zero start, fixed G/P.
                    acc[pi].success(mse(hn_recover(td.a.m, td.y, g, per_p), td.channel));
                } catch (const std::exception&) {
                    ++acc[pi].failures;
                }
            }
        }
        std::size_t best = 0;
        double best_mean = std::numeric_limits<double>::infinity();
        for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
            const double m = acc[pi].mean();
            if (acc[pi].successes > 0 && m < best_mean) {
                best_mean = m;
                best = pi;
            }
        }
        for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
            OraclePRow row;
            row.snr_db = snr;
            row.p = p_grid[pi];
            row.mean_mse = acc[pi].mean();
            row.trials = cfg.trials;
            row.failures = acc[pi].failures;
            row.best = pi == best;
            table.rows.push_back(row);
        }
    }
    return table;
}

} // namespace sparsechan
