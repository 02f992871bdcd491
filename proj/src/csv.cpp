#include "sparsechan/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sparsechan/errors.hpp"

namespace sparsechan {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

double to_db(double v) { return 10.0 * std::log10(v); }

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

} // namespace

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit_csv(const ResultTable& table, const std::string& path) {
    auto out = open_out(path);
    out << "snr_db,estimator,mean_mse,mean_mse_db,crb_u,crb_s,trials,failures,extra\n";
    for (const auto& r : table.rows) {
        out << format_g(r.snr_db) << ',' << r.estimator << ',' << format_g(r.mean_mse) << ','
            << format_g(to_db(r.mean_mse)) << ',' << format_g(r.crb_u) << ','
            << format_g(r.crb_s) << ',' << r.trials << ',' << r.failures << ',' << r.extra
            << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void emit_csv(const OraclePTable& table, const std::string& path) {
    auto out = open_out(path);
    out << "snr_db,p,mean_mse,mean_mse_db,trials,failures,best\n";
    for (const auto& r : table.rows) {
        out << format_g(r.snr_db) << ',' << format_g(r.p) << ',' << format_g(r.mean_mse) << ','
            << format_g(to_db(r.mean_mse)) << ',' << r.trials << ',' << r.failures << ','
            << (r.best ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void emit_lambda_csv(const std::vector<LambdaFitPoint>& points, const EigFit& fit,
                     const std::string& path) {
    auto out = open_out(path);
    out << "n,k,mean_lambda,fit_intercept,fit_slope\n";
    for (const auto& p : points) {
        out << p.n << ',' << p.k << ',' << format_g(p.mean_lambda) << ',' << format_g(fit.a0)
            << ',' << format_g(fit.a1) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void emit_power_csv(int m, int n, int s, const PowerCheckReport& report,
                    const std::string& path) {
    auto out = open_out(path);
    out << "m,n,s,trials,rate,bound,mean_norm_sq\n";
    out << m << ',' << n << ',' << s << ',' << report.trials << ',' << format_g(report.rate)
        << ',' << format_g(report.bound) << ',' << format_g(report.norm_sq) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

ResultTable parse_result_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty result file: " + path);
    if (line != "snr_db,estimator,mean_mse,mean_mse_db,crb_u,crb_s,trials,failures,extra")
        throw IoError("unexpected result header in " + path);
    ResultTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_commas(line);
        if (f.size() != 9) throw IoError("malformed result row in " + path + ": " + line);
        ResultRow row;
        row.snr_db = std::stod(f[0]);
        row.estimator = f[1];
        row.mean_mse = std::stod(f[2]);
        row.crb_u = std::stod(f[4]);
        row.crb_s = std::stod(f[5]);
        row.trials = std::stoi(f[6]);
        row.failures = std::stoi(f[7]);
        row.extra = f[8];
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace sparsechan
