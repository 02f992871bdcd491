#include "sparsechan/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sparsechan/errors.hpp"

namespace sparsechan {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

int parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' expects an integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' expects a number, got '" + v + "'");
    }
}

} // namespace

void ExperimentConfig::validate() const {
    if (config_version != 1) throw ConfigError("config_version: only version 1 is supported");
    if (m < 1) throw ConfigError("m: training length must be positive");
    if (n < 2) throw ConfigError("n: delay spread must be at least 2");
    if (s < 1 || s > n) throw ConfigError("s: sparsity must satisfy 1 <= s <= n");
    if (k < 1 || k > m + n - 1)
        throw ConfigError("k: measurement rank must satisfy 1 <= k <= m+n-1");
    if (snr_db_list.empty()) throw ConfigError("snr_db: the SNR list must be non-empty");
    if (trials < 1) throw ConfigError("trials: need at least one trial");
    if (n_t < 2) throw ConfigError("n_t: need at least 2 thresholds");
    if (gamma < 0.0) throw ConfigError("gamma: must be non-negative");
    if (!p_oracle && p_value <= 0.0) throw ConfigError("p: divisor must be positive");
    if (estimators.empty()) throw ConfigError("estimators: the list must be non-empty");
    for (const auto& e : estimators)
        if (std::find(kEstimatorIds.begin(), kEstimatorIds.end(), e) == kEstimatorIds.end())
            throw ConfigError("estimators: unknown estimator '" + e + "'");
    if (!p_oracle)
        return;
    if (std::find(estimators.begin(), estimators.end(), "hn_fixed_p") != estimators.end())
        throw ConfigError("p: hn_fixed_p requires a numeric divisor, not 'oracle'");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) +
                              ": expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty())
            throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                              "' has no value");

        if (key == "config_version") cfg.config_version = parse_int(value, key, line);
        else if (key == "m") cfg.m = parse_int(value, key, line);
        else if (key == "n") cfg.n = parse_int(value, key, line);
        else if (key == "s") cfg.s = parse_int(value, key, line);
        else if (key == "k") cfg.k = parse_int(value, key, line);
        else if (key == "trials") cfg.trials = parse_int(value, key, line);
        else if (key == "n_t") cfg.n_t = parse_int(value, key, line);
        else if (key == "gamma") cfg.gamma = parse_double(value, key, line);
        else if (key == "seed") {
            try {
                cfg.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw ConfigError("config line " + std::to_string(line) +
                                  ": key 'seed' expects an unsigned integer");
            }
        } else if (key == "snr_db") {
            cfg.snr_db_list.clear();
            for (const auto& tok : split(value, ','))
                if (!tok.empty()) cfg.snr_db_list.push_back(parse_double(tok, key, line));
        } else if (key == "estimators") {
            cfg.estimators.clear();
            for (const auto& tok : split(value, ','))
                if (!tok.empty()) cfg.estimators.push_back(tok);
        } else if (key == "p") {
            if (value == "oracle") {
                cfg.p_oracle = true;
            } else {
                cfg.p_oracle = false;
                cfg.p_value = parse_double(value, key, line);
            }
        } else {
            throw ConfigError("config line " + std::to_string(line) + ": unknown key '" +
                              key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace sparsechan
