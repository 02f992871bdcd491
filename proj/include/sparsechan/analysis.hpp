#pragma once

#include <utility>
#include <vector>

#include "sparsechan/estimators.hpp"
#include "sparsechan/linops.hpp"
#include "sparsechan/rng.hpp"
#include "sparsechan/signal_model.hpp"

namespace sparsechan {

struct CrbReport {
    double crb_u = 0.0;
    double crb_s = 0.0;
    double sigma = 0.0;
    std::vector<int> support_used;
};

struct PowerCheckReport {
    double norm_sq = 0.0; // ||C h||^2 (mean over trials in Monte Carlo mode)
    double bound = 0.0;   // (M+N-1)/M
    bool satisfied = false;
    int trials = 1;
    double rate = 0.0; // fraction of trials satisfying the bound
};

/// sigma^2 * trace{(C^T C)^-1}; throws SingularityError on a singular gram.
double crb_unstructured(const ConvolutionBasis& c, double sigma);

/// sigma^2 * trace of the pseudo-inverse gram restricted to the support.
double crb_structured(const ConvolutionBasis& c, double sigma, const std::vector<int>& support);

/// Both bounds for one noise level and support.
CrbReport crb_report(const ConvolutionBasis& c, double sigma, const std::vector<int>& support);

/// Squared Euclidean error ||h_hat - h||^2 (unnormalized, the CRB scale).
double mse(const Vector& h_hat, const Vector& h);
double mse(const Estimate& h_hat, const SparseChannel& h);

/// ||C h||^2 against the bound (M+N-1)/M; requires a normalized basis.
PowerCheckReport power_check(const ConvolutionBasis& c, const SparseChannel& h);

/// Fraction of fresh (c, h) draws satisfying the power bound. Channels use
/// the mean-zero Gaussian-clipped amplitude law.
PowerCheckReport power_montecarlo(int m, int n, int s, int trials, RngStream& rng);

/// per_sample = exp(-1/(2S)); aggregate = 1 - per_sample^(M+N-1).
std::pair<double, double> hoeffding_bound(int s, int m, int n);

} // namespace sparsechan
