#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sparsechan/linops.hpp"
#include "sparsechan/measurement.hpp"
#include "sparsechan/signal_model.hpp"

namespace sparsechan {

struct Estimate {
    Vector h_hat;
    std::string estimator_id;
    int iterations_used = 0; // 0 for non-iterative estimators
};

/// Parameters of the iterative thresholding recovery.
struct HNConfig {
    double amplitude_bound = 0.0; // B, 1/sqrt(M) for the normalized basis
    double sigma = 0.0;           // noise std
    double lambda = 1.0;          // upper bound on lambda_max(A^T A)
    double divisor_p = 1.0;       // threshold actually applied is G / P
    int max_iters = 500;
    double fixpoint_tol = 1e-8;   // sup-norm stop

    double epsilon() const; // 1/(50 (B + sigma)^2)
};

/// Affine threshold law G(sigma) = (a + sigma) * b for fixed M, N.
struct ThresholdModel {
    double a = 0.0;
    double b = 0.0;
    int m = 0;
    int n = 0;

    double g(double sigma) const { return (a + sigma) * b; }
};

/// Discrete thresholds t(i) derived from the threshold law and the
/// amplitude range of an initial channel estimate. Ascending.
struct ThresholdSet {
    std::vector<double> t;
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    double delta = 0.0; // max|initial| / N_t
};

/// Per-threshold residual-sum errors and the discrete-derivative selection.
struct PeaCsTrace {
    std::vector<double> errors;     // e(i), size N_t
    std::vector<double> derivative; // e(i+1) - e(i), size N_t - 1
    int chosen_index = 0;           // 0-based into the threshold set
    bool fallback = false;          // all estimates identical
};

/// Per-tap normalized correlation, h_hat(n) = c_n^T r / ||c_n||^2.
Estimate sliding_correlator(const ConvolutionBasis& c, const ReceivedSignal& r);

/// h_hat = A^T y.
Estimate max_energy(const EffectiveMatrix& a, const Vector& y);

/// Decision threshold G = sqrt(2 log(2) log(N) / (lambda * epsilon)) with
/// epsilon = 1/(50 (B + sigma)^2), B = 1/sqrt(M).
double hn_threshold(int m, int n, double sigma, double lambda);

/// Gradient step plus hard threshold: chi = theta + A^T(y - A theta)/lambda,
/// keep chi_k when |chi_k| >= G/P. Starts from zero unless a start vector is
/// given. Stops at the sup-norm fixed point or after max_iters.
Estimate hn_recover(const Matrix& a, const Vector& y, double g, const HNConfig& cfg,
                    const std::optional<Vector>& start = std::nullopt);

/// Threshold law constants from the eigenvalue fit:
/// b = sqrt(2 log(2) * 50 * log(N)) / lambda(N), a = 1/sqrt(M).
ThresholdModel calibrate_threshold_model(int m, int n, const EigFit& fit);

/// G_i over an even sigma grid on [sigma_lo, sigma_hi], delta from the
/// initial estimate's amplitude range: t(i) = G_i * (i * delta) / max G.
ThresholdSet threshold_set(const Estimate& initial, const ThresholdModel& model,
                           double sigma_lo, double sigma_hi, int n_t);

/// Selection rule behind pea_cs: the smallest index i >= 1 whose forward
/// difference e(i) - e(i-1) lies in the stability tie band (identical
/// adjacent estimates mark a stable cluster). Returns the chosen 0-based
/// index and a fallback flag set when every difference is exactly zero.
std::pair<int, bool> pea_select_index(const std::vector<double>& errors);

/// Parallel recovery at every threshold, then selection by the smallest
/// stable discrete derivative of the residual-sum error. The start vector
/// seeds every parallel recovery (pass the initial channel estimate).
std::pair<Estimate, PeaCsTrace> pea_cs(const Matrix& a, const Vector& y,
                                       const ThresholdSet& ts, const HNConfig& cfg,
                                       const std::optional<Vector>& start = std::nullopt);

/// Classic greedy matching pursuit: exactly `iterations` picks, coefficients
/// accumulate when a column repeats.
Estimate matching_pursuit(const Matrix& dict, const Vector& y, int iterations);

/// min ||theta||_1 subject to ||A^T(A theta - y)||_inf <= gamma, solved by a
/// primal-dual interior point method on the epigraph LP. Deterministic.
Estimate dantzig_selector(const Matrix& a, const Vector& y, double gamma);

} // namespace sparsechan
