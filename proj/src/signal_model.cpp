#include "sparsechan/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsechan/errors.hpp"

namespace sparsechan {

SparseChannel gen_sparse_channel(int n, int s, AmplitudeLaw law, RngStream& rng) {
    if (n < 1) throw DomainError("gen_sparse_channel: N must be positive");
    if (s < 1 || s > n) throw DomainError("gen_sparse_channel: need 1 <= S <= N");

    // Partial Fisher-Yates: exactly S index draws.
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
        const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    std::vector<int> support(idx.begin(), idx.begin() + s);
    std::sort(support.begin(), support.end());

    SparseChannel ch;
    ch.delay_spread = n;
    ch.support = std::move(support);
    ch.h = Vector::Zero(n);
    for (const int j : ch.support) {
        double amp = 0.0;
        switch (law) {
            case AmplitudeLaw::kUniform: {
                // Magnitude floor keeps every tap resolvable by recovery.
                const double mag = rng.uniform(0.1, 1.0);
                amp = rng.rademacher() * mag;
                break;
            }
            case AmplitudeLaw::kGaussianClipped: {
                do {
                    amp = rng.gaussian() / std::sqrt(3.0);
                } while (amp == 0.0);
                amp = std::clamp(amp, -1.0, 1.0);
                break;
            }
        }
        ch.h(j) = amp;
    }
    return ch;
}

TrainingSequence gen_training(int m, RngStream& rng) {
    if (m < 1) throw DomainError("gen_training: M must be positive");
    TrainingSequence c;
    c.symbols = Vector(m);
    for (int i = 0; i < m; ++i) c.symbols(i) = rng.rademacher();
    return c;
}

ConvolutionBasis build_convolution(const TrainingSequence& c, int n, bool normalize) {
    if (n < 1) throw DomainError("build_convolution: N must be positive");
    const int m = c.length();
    if (m < 1) throw DomainError("build_convolution: empty training sequence");

    ConvolutionBasis basis;
    basis.m = Matrix::Zero(m + n - 1, n);
    for (int j = 0; j < n; ++j)
        for (int t = 0; t < m; ++t) basis.m(j + t, j) = c.symbols(t);
    if (normalize) basis.m /= std::sqrt(static_cast<double>(m));
    basis.normalized = normalize;
    basis.source = c;
    basis.delay_spread = n;
    return basis;
}

ReceivedSignal transmit(const ConvolutionBasis& c, const SparseChannel& h, double sigma,
                        RngStream& rng) {
    if (c.delay_spread != h.delay_spread)
        throw DimensionError("transmit: basis and channel delay spreads differ");
    if (sigma < 0.0) throw DomainError("transmit: sigma must be non-negative");

    ReceivedSignal r;
    r.samples = c.m * h.h;
    if (sigma > 0.0)
        for (Eigen::Index i = 0; i < r.samples.size(); ++i)
            r.samples(i) += sigma * rng.gaussian();
    r.noise_sigma = sigma;
    return r;
}

double snr_to_sigma(double snr_db, const ConvolutionBasis& c, const SparseChannel& h) {
    if (c.delay_spread != h.delay_spread)
        throw DimensionError("snr_to_sigma: basis and channel delay spreads differ");
    const Vector x = c.m * h.h;
    const double power = x.squaredNorm() / static_cast<double>(x.size());
    if (power == 0.0) throw DomainError("snr_to_sigma: zero channel has no SNR");
    return std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
}

} // namespace sparsechan
