#include "sparsechan/linops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "sparsechan/errors.hpp"

namespace sparsechan {

Matrix rademacher_matrix(int rows, int cols, RngStream& rng, bool column_normalize) {
    if (rows < 1 || cols < 1)
        throw DimensionError("rademacher_matrix: rows and cols must be positive");
    Matrix m(rows, cols);
    // Row-major fill so the draw order is part of the documented contract.
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = rng.rademacher();
    if (column_normalize) m /= std::sqrt(static_cast<double>(rows));
    return m;
}

double spectral_top(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0)
        throw DimensionError("spectral_top: matrix must be nonempty");

    // lambda_max(A^T A) == lambda_max(A A^T); iterate on the smaller gram.
    const bool use_left = a.rows() < a.cols();
    const Matrix gram = use_left ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
    const Eigen::Index n = gram.rows();

    // All-ones start plus a tiny fixed-seed perturbation so the start is
    // never orthogonal to the top eigenvector; deterministic across calls.
    RngStream rng(0x73706563746F70ULL); // "spectop"
    Vector v = Vector::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) += 1e-6 * (rng.uniform01() - 0.5);
    v /= v.norm();

    const double tol = 1e-10;
    const int max_iters = 10000;
    double lambda = v.dot(gram * v);
    for (int it = 0; it < max_iters; ++it) {
        Vector w = gram * v;
        const double wn = w.norm();
        if (wn == 0.0) return 0.0; // gram annihilates v: PSD with top eigenvalue 0
        v = w / wn;
        const double next = v.dot(gram * v);
        if (std::abs(next - lambda) <= tol * std::max(std::abs(next), 1e-300)) return next;
        lambda = next;
    }
    throw ConvergenceError("spectral_top: power iteration did not converge; last iterate " +
                           std::to_string(lambda));
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw DimensionError("linear_fit: need matching xs/ys with at least 2 points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw SingularityError("linear_fit: xs are all identical");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double r2 = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - fit.intercept - fit.slope * xs[i];
        r2 += r * r;
    }
    fit.residual_norm = std::sqrt(r2);
    return fit;
}

double trace_inverse_gram(const Matrix& a, const std::vector<int>& support) {
    if (a.rows() == 0 || a.cols() == 0)
        throw DimensionError("trace_inverse_gram: matrix must be nonempty");
    if (support.empty()) throw DomainError("trace_inverse_gram: empty support");

    Matrix sub(a.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) {
        const int j = support[k];
        if (j < 0 || j >= a.cols())
            throw DomainError("trace_inverse_gram: support index out of range");
        sub.col(static_cast<Eigen::Index>(k)) = a.col(j);
    }

    const Matrix gram = sub.transpose() * sub;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const Vector evs = es.eigenvalues();
    const double top = evs.maxCoeff();
    if (top <= 0.0) return 0.0; // zero submatrix: pseudo-inverse is zero
    double trace = 0.0;
    for (Eigen::Index i = 0; i < evs.size(); ++i) {
        // Pseudo-inverse convention: near-zero eigenvalues contribute nothing.
        if (evs(i) > 1e-10 * top) trace += 1.0 / evs(i);
    }
    return trace;
}

double trace_inverse_gram(const Matrix& a) {
    std::vector<int> all(static_cast<std::size_t>(a.cols()));
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = static_cast<int>(j);
    return trace_inverse_gram(a, all);
}

} // namespace sparsechan
