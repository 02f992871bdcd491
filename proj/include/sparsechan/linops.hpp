#pragma once

#include <Eigen/Core>
#include <vector>

#include "sparsechan/rng.hpp"

namespace sparsechan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordinary least-squares line ys ~ intercept + slope * xs.
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual_norm = 0.0; // ||ys - intercept - slope*xs||_2
};

/// rows x cols matrix of i.i.d. +/-1 entries; with column_normalize every
/// entry is divided by sqrt(rows) so columns have unit Euclidean norm.
Matrix rademacher_matrix(int rows, int cols, RngStream& rng, bool column_normalize);

/// Largest eigenvalue of A^T A by power iteration on the smaller-side gram,
/// relative tolerance 1e-10, at most 10000 iterations.
double spectral_top(const Matrix& a);

/// OLS fit; throws SingularityError when all xs coincide.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

inline constexpr int kAllColumns = -1;

/// trace{(A_S^T A_S)^+} for the selected columns (pseudo-inverse semantics:
/// eigenvalues below 1e-10 * lambda_max contribute zero). Pass kAllColumns
/// via the overload below for the full gram.
double trace_inverse_gram(const Matrix& a, const std::vector<int>& support);
double trace_inverse_gram(const Matrix& a); // all columns

} // namespace sparsechan
