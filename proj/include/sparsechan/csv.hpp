#pragma once

#include <string>
#include <vector>

#include "sparsechan/analysis.hpp"
#include "sparsechan/measurement.hpp"
#include "sparsechan/sweep.hpp"

namespace sparsechan {

/// 12-significant-digit decimal rendering used by every CSV writer.
std::string format_g(double v);

/// Header then one row per table row; LF line endings, UTF-8.
void emit_csv(const ResultTable& table, const std::string& path);
void emit_csv(const OraclePTable& table, const std::string& path);

void emit_lambda_csv(const std::vector<LambdaFitPoint>& points, const EigFit& fit,
                     const std::string& path);

void emit_power_csv(int m, int n, int s, const PowerCheckReport& report,
                    const std::string& path);

/// Inverse of emit_csv(ResultTable); used by the round-trip checks.
ResultTable parse_result_table(const std::string& path);

} // namespace sparsechan
