#include "sparsechan/measurement.hpp"

#include <cmath>
#include <set>

#include "sparsechan/errors.hpp"

namespace sparsechan {

MeasurementMatrix gen_measurement(int k, int signal_len, RngStream& rng) {
    if (k < 1) throw DomainError("gen_measurement: K must be positive");
    if (k > signal_len)
        throw DomainError("gen_measurement: rank K cannot exceed the signal length");
    MeasurementMatrix phi;
    phi.m = rademacher_matrix(k, signal_len, rng, /*column_normalize=*/true);
    phi.rank_k = k;
    return phi;
}

Vector project(const MeasurementMatrix& phi, const ReceivedSignal& r) {
    if (phi.m.cols() != r.samples.size())
        throw DimensionError("project: measurement width does not match signal length");
    return phi.m * r.samples;
}

EffectiveMatrix effective(const MeasurementMatrix& phi, const ConvolutionBasis& c) {
    if (!c.normalized)
        throw DomainError("effective: basis must be normalized (C/sqrt(M))");
    if (phi.m.cols() != c.m.rows())
        throw DimensionError("effective: inner dimensions disagree");
    EffectiveMatrix a;
    a.m = phi.m * c.m;
    a.phi_rank = phi.rank_k;
    a.delay_spread = c.delay_spread;
    return a;
}

int min_rank(int s, int n, double log_base) {
    if (s < 1) throw DomainError("min_rank: S must be positive");
    if (n < 2) throw DomainError("min_rank: N must be at least 2");
    if (log_base <= 1.0) throw DomainError("min_rank: log base must exceed 1");
    return static_cast<int>(
        std::ceil(s * std::log(static_cast<double>(n)) / std::log(log_base)));
}

EigFit lambda_fit(int m, const std::vector<int>& n_values, KRule k_rule, int trials_per_n,
                  RngStream& rng, std::vector<LambdaFitPoint>& points) {
    if (m < 1) throw DomainError("lambda_fit: M must be positive");
    if (trials_per_n < 1) throw DomainError("lambda_fit: need at least one trial per N");
    std::set<int> distinct(n_values.begin(), n_values.end());
    if (distinct.size() < 2) throw DomainError("lambda_fit: need at least 2 distinct N values");
    for (const int n : n_values)
        if (n < 2) throw DomainError("lambda_fit: every N must be at least 2");

    points.clear();
    std::vector<double> xs, ys;
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
        const int n = n_values[ni];
        const int k = (k_rule.kind == KRule::Kind::kHalfN) ? std::max(1, n / 2) : k_rule.fixed_k;
        if (k < 1) throw DomainError("lambda_fit: fixed K must be positive");
        const int len = m + n - 1;
        double acc = 0.0;
        for (int t = 0; t < trials_per_n; ++t) {
            RngStream sub = rng.fork(static_cast<std::uint64_t>(ni),
                                     static_cast<std::uint64_t>(t));
            const Matrix phi = rademacher_matrix(k, len, sub, /*column_normalize=*/true);
            acc += spectral_top(phi);
        }
        const double mean = acc / trials_per_n;
        points.push_back({n, k, mean});
        xs.push_back(static_cast<double>(n));
        ys.push_back(mean);
    }

    const LinearFit fit = linear_fit(xs, ys);
    EigFit out;
    out.a0 = fit.intercept;
    out.a1 = fit.slope;
    out.n_low = *std::min_element(n_values.begin(), n_values.end());
    out.n_high = *std::max_element(n_values.begin(), n_values.end());
    out.m = m;
    return out;
}

EigFit lambda_fit(int m, const std::vector<int>& n_values, KRule k_rule, int trials_per_n,
                  RngStream& rng) {
    std::vector<LambdaFitPoint> points;
    return lambda_fit(m, n_values, k_rule, trials_per_n, rng, points);
}

} // namespace sparsechan
