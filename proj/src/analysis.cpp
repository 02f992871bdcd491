#include "sparsechan/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "sparsechan/errors.hpp"

namespace sparsechan {

double crb_unstructured(const ConvolutionBasis& c, double sigma) {
    if (sigma < 0.0) throw DomainError("crb_unstructured: sigma must be non-negative");
    const Matrix gram = c.m.transpose() * c.m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const Vector evs = es.eigenvalues();
    const double top = evs.maxCoeff();
    if (top <= 0.0 || evs.minCoeff() <= 1e-10 * top)
        throw SingularityError("crb_unstructured: gram is singular");
    double trace = 0.0;
    for (Eigen::Index i = 0; i < evs.size(); ++i) trace += 1.0 / evs(i);
    return sigma * sigma * trace;
}

double crb_structured(const ConvolutionBasis& c, double sigma, const std::vector<int>& support) {
    if (sigma < 0.0) throw DomainError("crb_structured: sigma must be non-negative");
    if (support.empty()) throw DomainError("crb_structured: empty support");
    return sigma * sigma * trace_inverse_gram(c.m, support);
}

CrbReport crb_report(const ConvolutionBasis& c, double sigma, const std::vector<int>& support) {
    CrbReport rep;
    rep.crb_u = crb_unstructured(c, sigma);
    rep.crb_s = crb_structured(c, sigma, support);
    rep.sigma = sigma;
    rep.support_used = support;
    return rep;
}

double mse(const Vector& h_hat, const Vector& h) {
    if (h_hat.size() != h.size()) throw DimensionError("mse: length mismatch");
    return (h_hat - h).squaredNorm();
}

double mse(const Estimate& h_hat, const SparseChannel& h) {
    return mse(h_hat.h_hat, h.h);
}

PowerCheckReport power_check(const ConvolutionBasis& c, const SparseChannel& h) {
    if (!c.normalized) throw DomainError("power_check: basis must be normalized");
    if (c.delay_spread != h.delay_spread)
        throw DimensionError("power_check: basis and channel delay spreads differ");
    const int m = c.training_length();
    PowerCheckReport rep;
    rep.norm_sq = (c.m * h.h).squaredNorm();
    rep.bound = static_cast<double>(c.rows()) / static_cast<double>(m);
    rep.satisfied = rep.norm_sq <= rep.bound;
    rep.trials = 1;
    rep.rate = rep.satisfied ? 1.0 : 0.0;
    return rep;
}

PowerCheckReport power_montecarlo(int m, int n, int s, int trials, RngStream& rng) {
    if (trials < 1) throw DomainError("power_montecarlo: need at least one trial");
    int passed = 0;
    double norm_acc = 0.0;
    double bound = 0.0;
    for (int t = 0; t < trials; ++t) {
        RngStream c_rng = rng.fork(static_cast<std::uint64_t>(t), 0);
        RngStream h_rng = rng.fork(static_cast<std::uint64_t>(t), 1);
        const TrainingSequence c = gen_training(m, c_rng);
        const SparseChannel h = gen_sparse_channel(n, s, AmplitudeLaw::kGaussianClipped, h_rng);
        const ConvolutionBasis basis = build_convolution(c, n, /*normalize=*/true);
        const PowerCheckReport one = power_check(basis, h);
        passed += one.satisfied ? 1 : 0;
        norm_acc += one.norm_sq;
        bound = one.bound;
    }
    PowerCheckReport rep;
    rep.norm_sq = norm_acc / trials;
    rep.bound = bound;
    rep.trials = trials;
    rep.rate = static_cast<double>(passed) / trials;
    rep.satisfied = passed == trials;
    return rep;
}

std::pair<double, double> hoeffding_bound(int s, int m, int n) {
    if (s < 1) throw DomainError("hoeffding_bound: S must be positive");
    if (m < 1 || n < 1) throw DomainError("hoeffding_bound: M and N must be positive");
    const double per_sample = std::exp(-1.0 / (2.0 * s));
    const double aggregate = 1.0 - std::pow(per_sample, m + n - 1);
    return {per_sample, aggregate};
}

} // namespace sparsechan
