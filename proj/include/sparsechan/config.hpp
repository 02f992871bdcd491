#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sparsechan {

inline const std::vector<std::string> kEstimatorIds = {
    "sliding", "max_energy", "hn_oracle_p", "hn_fixed_p", "pea_cs", "mp", "ds"};

/// Divisor grid used by the oracle-P estimator and as the default for the
/// oracle-p search command: 1..10 plus the literature value 4.6.
inline const std::vector<double> kDefaultPGrid = {1, 2, 3, 4, 4.6, 5, 6, 7, 8, 9, 10};

struct ExperimentConfig {
    int config_version = 1;
    int m = 200;
    int n = 100;
    int s = 3;
    int k = 50;
    std::vector<double> snr_db_list = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    int trials = 200;
    std::uint64_t seed = 20080301;
    std::vector<std::string> estimators = {"mp", "pea_cs", "hn_oracle_p"};
    double gamma = 0.24;
    bool p_oracle = true; // p = "oracle" sweeps the divisor grid
    double p_value = 4.6; // used when p is numeric
    int n_t = 21;

    /// Throws ConfigError naming the violated field.
    void validate() const;
};

/// Parse a flat key = value file ('#' comments, blank lines allowed) and
/// fill unspecified keys with the defaults above.
ExperimentConfig load_config(const std::string& path);

/// Parse from an already-read buffer (used by load_config and tests).
ExperimentConfig parse_config(const std::string& text);

} // namespace sparsechan
