#pragma once

#include <vector>

#include "sparsechan/linops.hpp"
#include "sparsechan/rng.hpp"
#include "sparsechan/signal_model.hpp"

namespace sparsechan {

/// K x (M+N-1) Rademacher matrix with entries +/- 1/sqrt(K).
struct MeasurementMatrix {
    Matrix m;
    int rank_k = 0;
};

/// A = Phi * C/sqrt(M), the sensing operator seen by the recovery
/// algorithms. Shape K x N.
struct EffectiveMatrix {
    Matrix m;
    int phi_rank = 0;
    int delay_spread = 0;
};

/// Linear approximation lambda(N) = a0 + a1*N of the largest gram
/// eigenvalue of the normalized measurement matrix, fitted over
/// [n_low, n_high] at a fixed training length.
struct EigFit {
    double a0 = 0.0;
    double a1 = 0.0;
    int n_low = 0;
    int n_high = 0;
    int m = 0;

    double lambda(int n) const { return a0 + a1 * n; }
};

/// Measurement rank policy for lambda_fit.
struct KRule {
    enum class Kind { kHalfN, kFixed } kind = Kind::kHalfN;
    int fixed_k = 0;

    static KRule half_n() { return {Kind::kHalfN, 0}; }
    static KRule fixed(int k) { return {Kind::kFixed, k}; }
};

MeasurementMatrix gen_measurement(int k, int signal_len, RngStream& rng);

/// y = Phi * r.
Vector project(const MeasurementMatrix& phi, const ReceivedSignal& r);

/// Requires a normalized basis; callers must divide by sqrt(M) first.
EffectiveMatrix effective(const MeasurementMatrix& phi, const ConvolutionBasis& c);

/// Smallest integer K with K >= S * log(N). Natural log by default; the
/// base is a knob because the literature leaves it open.
int min_rank(int s, int n, double log_base = 2.718281828459045);

/// Per-N mean of spectral_top over normalized K x (M+N-1) Rademacher
/// matrices, then an OLS line through (N, mean lambda).
EigFit lambda_fit(int m, const std::vector<int>& n_values, KRule k_rule, int trials_per_n,
                  RngStream& rng);

/// Per-N detail rows behind lambda_fit, for CSV emission.
struct LambdaFitPoint {
    int n = 0;
    int k = 0;
    double mean_lambda = 0.0;
};
EigFit lambda_fit(int m, const std::vector<int>& n_values, KRule k_rule, int trials_per_n,
                  RngStream& rng, std::vector<LambdaFitPoint>& points);

} // namespace sparsechan
