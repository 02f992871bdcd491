#pragma once

#include <string>
#include <vector>

#include "sparsechan/config.hpp"
#include "sparsechan/measurement.hpp"

namespace sparsechan {

struct ResultRow {
    double snr_db = 0.0;
    std::string estimator;
    double mean_mse = 0.0; // over non-failed trials
    double crb_u = 0.0;    // trial averages
    double crb_s = 0.0;
    int trials = 0;
    int failures = 0;
    std::string extra; // best divisor, chosen-threshold histogram, ...
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

struct OraclePRow {
    double snr_db = 0.0;
    double p = 0.0;
    double mean_mse = 0.0;
    int trials = 0;
    int failures = 0;
    bool best = false;
};

struct OraclePTable {
    std::vector<OraclePRow> rows;
};

/// Seeded Monte Carlo sweep: per (snr, trial) a fresh (c, h, Phi, noise)
/// tuple from forked substreams; every selected estimator runs on the same
/// tuple. Identical seed implies an identical table.
ResultTable run_sweep(const ExperimentConfig& cfg);

/// Divisor sweep for the fixed-threshold recovery (cold start): per SNR the
/// divisor minimizing mean MSE, plus the full (P, MSE) grid. Data streams
/// are forked exactly as in run_sweep.
OraclePTable oracle_p_search(const ExperimentConfig& cfg, const std::vector<double>& p_grid);

/// Eigenvalue-fit range used by run_sweep to calibrate the threshold model:
/// five delay spreads between N/2 and 3N/2.
std::vector<int> default_fit_range(int n);

} // namespace sparsechan
