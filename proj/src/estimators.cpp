#include "sparsechan/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsechan/errors.hpp"

namespace sparsechan {

double HNConfig::epsilon() const {
    const double s = amplitude_bound + sigma;
    if (s <= 0.0) throw DomainError("HNConfig: B + sigma must be positive");
    return 1.0 / (50.0 * s * s);
}

Estimate sliding_correlator(const ConvolutionBasis& c, const ReceivedSignal& r) {
    if (c.m.rows() != r.samples.size())
        throw DimensionError("sliding_correlator: basis rows and signal length differ");
    Estimate est;
    est.estimator_id = "sliding";
    est.h_hat = Vector(c.m.cols());
    for (Eigen::Index j = 0; j < c.m.cols(); ++j) {
        const double nn = c.m.col(j).squaredNorm();
        if (nn == 0.0) throw SingularityError("sliding_correlator: zero-norm column");
        est.h_hat(j) = c.m.col(j).dot(r.samples) / nn;
    }
    return est;
}

Estimate max_energy(const EffectiveMatrix& a, const Vector& y) {
    if (a.m.rows() != y.size())
        throw DimensionError("max_energy: matrix rows and measurement length differ");
    Estimate est;
    est.estimator_id = "max_energy";
    est.h_hat = a.m.transpose() * y;
    return est;
}

double hn_threshold(int m, int n, double sigma, double lambda) {
    if (lambda <= 0.0) throw DomainError("hn_threshold: lambda must be positive");
    if (m < 1 || n < 2) throw DomainError("hn_threshold: need M >= 1, N >= 2");
    if (sigma < 0.0) throw DomainError("hn_threshold: sigma must be non-negative");
    const double b = 1.0 / std::sqrt(static_cast<double>(m));
    const double eps = 1.0 / (50.0 * (b + sigma) * (b + sigma));
    return std::sqrt(2.0 * std::log(2.0) * std::log(static_cast<double>(n)) / (lambda * eps));
}

Estimate hn_recover(const Matrix& a, const Vector& y, double g, const HNConfig& cfg,
                    const std::optional<Vector>& start) {
    if (a.rows() != y.size())
        throw DimensionError("hn_recover: matrix rows and measurement length differ");
    if (g < 0.0) throw DomainError("hn_recover: threshold must be non-negative");
    if (cfg.lambda <= 0.0) throw DomainError("hn_recover: lambda must be positive");
    if (cfg.divisor_p <= 0.0) throw DomainError("hn_recover: divisor P must be positive");

    const double applied = g / cfg.divisor_p;
    Vector theta = start ? *start : Vector(Vector::Zero(a.cols()));
    if (theta.size() != a.cols())
        throw DimensionError("hn_recover: start vector length differs from column count");

    Estimate est;
    est.estimator_id = "hn";
    for (int it = 0; it < cfg.max_iters; ++it) {
        Vector chi = theta + a.transpose() * (y - a * theta) / cfg.lambda;
        if (!chi.allFinite())
            throw DivergenceError("hn_recover: iterate left the finite range; "
                                  "lambda likely under-estimates the gram spectrum");
        Vector next = (chi.array().abs() >= applied).select(chi, 0.0);
        const double step = (next - theta).lpNorm<Eigen::Infinity>();
        theta = std::move(next);
        if (step < cfg.fixpoint_tol) {
            est.iterations_used = it + 1;
            est.h_hat = std::move(theta);
            return est;
        }
    }
    est.iterations_used = cfg.max_iters;
    est.h_hat = std::move(theta);
    return est;
}

ThresholdModel calibrate_threshold_model(int m, int n, const EigFit& fit) {
    if (m < 1 || n < 2) throw DomainError("calibrate_threshold_model: need M >= 1, N >= 2");
    const double lam = fit.lambda(n);
    if (lam <= 0.0)
        throw DomainError("calibrate_threshold_model: fitted lambda(N) is not positive");
    ThresholdModel model;
    model.a = 1.0 / std::sqrt(static_cast<double>(m));
    model.b = std::sqrt(2.0 * std::log(2.0) * 50.0 * std::log(static_cast<double>(n))) / lam;
    model.m = m;
    model.n = n;
    return model;
}

ThresholdSet threshold_set(const Estimate& initial, const ThresholdModel& model,
                           double sigma_lo, double sigma_hi, int n_t) {
    if (n_t < 2) throw DomainError("threshold_set: need at least 2 thresholds");
    if (sigma_lo > sigma_hi || sigma_lo < 0.0)
        throw DomainError("threshold_set: need 0 <= sigma_lo <= sigma_hi");
    const double peak = initial.h_hat.size() ? initial.h_hat.lpNorm<Eigen::Infinity>() : 0.0;
    if (peak == 0.0)
        throw DomainError("threshold_set: initial estimate is identically zero");

    ThresholdSet ts;
    ts.sigma_lo = sigma_lo;
    ts.sigma_hi = sigma_hi;
    ts.delta = peak / n_t;
    std::vector<double> gs(static_cast<std::size_t>(n_t));
    double gmax = 0.0;
    for (int i = 0; i < n_t; ++i) {
        const double sig = sigma_lo + (sigma_hi - sigma_lo) * i / (n_t - 1);
        gs[static_cast<std::size_t>(i)] = model.g(sig);
        gmax = std::max(gmax, gs[static_cast<std::size_t>(i)]);
    }
    if (gmax <= 0.0) throw DomainError("threshold_set: threshold model is not positive");
    ts.t.resize(static_cast<std::size_t>(n_t));
    for (int i = 0; i < n_t; ++i)
        ts.t[static_cast<std::size_t>(i)] =
            gs[static_cast<std::size_t>(i)] * ((i + 1) * ts.delta) / gmax;
    return ts;
}

std::pair<int, bool> pea_select_index(const std::vector<double>& errors) {
    if (errors.size() < 2) throw DomainError("pea_select_index: need at least 2 errors");

    double min_nonzero = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const double e : errors) scale = std::max(scale, e);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double d = errors[i + 1] - errors[i];
        if (d != 0.0) min_nonzero = std::min(min_nonzero, std::abs(d));
    }
    // All estimates identical: defer to the caller's smallest threshold.
    if (!std::isfinite(min_nonzero)) return {0, true};

    // Smallest index whose derivative is indistinguishable from the most
    // stable pair. Exactly-zero derivatives (bit-identical adjacent
    // estimates) mark a stable cluster and count as candidates.
    const double tie_band = std::max(10.0 * min_nonzero, 1e-7 * scale);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        if (std::abs(errors[i + 1] - errors[i]) <= tie_band)
            return {static_cast<int>(i) + 1, false};
    return {static_cast<int>(errors.size()) - 1, false}; // unreachable
}

std::pair<Estimate, PeaCsTrace> pea_cs(const Matrix& a, const Vector& y,
                                       const ThresholdSet& ts, const HNConfig& cfg,
                                       const std::optional<Vector>& start) {
    if (ts.t.empty()) throw DomainError("pea_cs: empty threshold set");

    HNConfig inner = cfg;
    inner.divisor_p = 1.0; // thresholds are applied as-is

    const auto n_t = ts.t.size();
    std::vector<Estimate> ests;
    ests.reserve(n_t);
    PeaCsTrace trace;
    trace.errors.resize(n_t);
    for (std::size_t i = 0; i < n_t; ++i) {
        ests.push_back(hn_recover(a, y, ts.t[i], inner, start));
        // e(i) = |sum of residual entries|
        trace.errors[i] = std::abs((y - a * ests[i].h_hat).sum());
    }
    trace.derivative.resize(n_t - 1);
    for (std::size_t i = 0; i + 1 < n_t; ++i)
        trace.derivative[i] = trace.errors[i + 1] - trace.errors[i];

    const auto [chosen, fallback] = pea_select_index(trace.errors);
    trace.fallback = fallback;
    trace.chosen_index =
        fallback ? static_cast<int>(std::min_element(ts.t.begin(), ts.t.end()) - ts.t.begin())
                 : chosen;

    Estimate out = ests[static_cast<std::size_t>(trace.chosen_index)];
    out.estimator_id = "pea_cs";
    return {std::move(out), std::move(trace)};
}

Estimate matching_pursuit(const Matrix& dict, const Vector& y, int iterations) {
    if (dict.rows() != y.size())
        throw DimensionError("matching_pursuit: dictionary rows and signal length differ");
    if (iterations < 1) throw DomainError("matching_pursuit: need at least one iteration");

    const Eigen::Index n = dict.cols();
    Vector norms(n);
    for (Eigen::Index j = 0; j < n; ++j) norms(j) = dict.col(j).norm();

    Estimate est;
    est.estimator_id = "mp";
    est.h_hat = Vector::Zero(n);
    Vector residual = y;
    for (int it = 0; it < iterations; ++it) {
        int pick = -1;
        double best = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (norms(j) == 0.0) continue;
            const double score = std::abs(dict.col(j).dot(residual)) / norms(j);
            if (score > best) {
                best = score;
                pick = static_cast<int>(j);
            }
        }
        if (pick < 0) break; // all-zero dictionary
        const double coef = dict.col(pick).dot(residual) / (norms(pick) * norms(pick));
        est.h_hat(pick) += coef;
        residual -= coef * dict.col(pick);
    }
    est.iterations_used = iterations;
    return est;
}

} // namespace sparsechan
