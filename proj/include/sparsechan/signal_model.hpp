#pragma once

#include <vector>

#include "sparsechan/linops.hpp"
#include "sparsechan/rng.hpp"

namespace sparsechan {

/// Sparse tap vector: h(j) == 0 off the support, amplitudes in [-1, 1].
struct SparseChannel {
    int delay_spread = 0;      // N
    std::vector<int> support;  // ascending tap indices, |support| == S
    Vector h;                  // full length-N vector
};

/// Known +/-1 probe block of length M.
struct TrainingSequence {
    Vector symbols;
    int length() const { return static_cast<int>(symbols.size()); }
};

/// Toeplitz matrix C of shape (M+N-1) x N whose product with h is the
/// linear convolution of the training sequence and the channel. When
/// normalized, columns are divided by sqrt(M) and have unit norm.
struct ConvolutionBasis {
    Matrix m;
    bool normalized = false;
    TrainingSequence source;
    int delay_spread = 0; // N

    int rows() const { return static_cast<int>(m.rows()); }
    int training_length() const { return source.length(); }
};

struct ReceivedSignal {
    Vector samples; // length M+N-1
    double noise_sigma = 0.0;
};

enum class AmplitudeLaw {
    kUniform,         // |amp| uniform on [0.1, 1], random sign
    kGaussianClipped, // N(0, 1/3) clipped to [-1, 1]
};

/// S distinct taps drawn uniformly without replacement, amplitudes per law.
SparseChannel gen_sparse_channel(int n, int s, AmplitudeLaw law, RngStream& rng);

TrainingSequence gen_training(int m, RngStream& rng);

ConvolutionBasis build_convolution(const TrainingSequence& c, int n, bool normalize);

/// samples = C*h + n with n i.i.d. zero-mean Gaussian of std sigma.
ReceivedSignal transmit(const ConvolutionBasis& c, const SparseChannel& h, double sigma,
                        RngStream& rng);

/// sigma = sqrt(P_x / 10^(snr_db/10)) with P_x = ||C*h||^2 / (M+N-1),
/// the average per-sample signal power.
double snr_to_sigma(double snr_db, const ConvolutionBasis& c, const SparseChannel& h);

} // namespace sparsechan
