#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <string>

#include "sparsechan/errors.hpp"
#include "sparsechan/estimators.hpp"

namespace sparsechan {

namespace {

// Stacked residual norm of the primal-dual system: dual residuals for
// (theta, u) plus the centrality residuals of all four constraint blocks.
double residual_norm(const Matrix& q, const Vector& lu1, const Vector& lu2, const Vector& le1,
                     const Vector& le2, const Vector& fu1, const Vector& fu2, const Vector& fe1,
                     const Vector& fe2, double inv_tau) {
    const Vector rdx = lu1 - lu2 + q * (le1 - le2);
    const Vector rdu = Vector::Ones(lu1.size()) - lu1 - lu2;
    const Vector rc1 = -lu1.cwiseProduct(fu1).array() - inv_tau;
    const Vector rc2 = -lu2.cwiseProduct(fu2).array() - inv_tau;
    const Vector rc3 = -le1.cwiseProduct(fe1).array() - inv_tau;
    const Vector rc4 = -le2.cwiseProduct(fe2).array() - inv_tau;
    return std::sqrt(rdx.squaredNorm() + rdu.squaredNorm() + rc1.squaredNorm() +
                     rc2.squaredNorm() + rc3.squaredNorm() + rc4.squaredNorm());
}

// Largest step in (0, s] keeping v + s*dv strictly positive.
void clip_positive(const Vector& v, const Vector& dv, double& s) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv(i) < 0.0) s = std::min(s, -v(i) / dv(i));
}

} // namespace

// Epigraph LP: minimize 1^T u over (theta, u) subject to
//   theta - u <= 0, -theta - u <= 0,
//   A^T(A theta - y) - gamma <= 0, -A^T(A theta - y) - gamma <= 0,
// solved with a log-barrier primal-dual method (Newton steps on the
// centered KKT system, surrogate-gap update tau = mu*4n/gap, backtracking
// line search). All steps are deterministic functions of the input.
Estimate dantzig_selector(const Matrix& a, const Vector& y, double gamma) {
    if (a.rows() != y.size())
        throw DimensionError("dantzig_selector: matrix rows and measurement length differ");
    if (gamma < 0.0) throw DomainError("dantzig_selector: gamma must be non-negative");

    const Eigen::Index n = a.cols();
    Estimate est;
    est.estimator_id = "ds";

    const Vector aty = a.transpose() * y;
    if (aty.lpNorm<Eigen::Infinity>() <= gamma) {
        // The origin is feasible with objective zero, hence optimal.
        est.h_hat = Vector::Zero(n);
        return est;
    }
    if (gamma == 0.0)
        throw DomainError("dantzig_selector: gamma must be positive when the origin "
                          "is infeasible (equality-constrained case not supported)");

    const Matrix q = a.transpose() * a;

    // Strictly feasible start: the minimum-norm least-squares solution
    // zeroes the correlated residual (A^T annihilates the leftover).
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
    Vector x = cod.solve(y);
    Vector r = q * x - aty;
    if (r.lpNorm<Eigen::Infinity>() >= gamma)
        throw ConvergenceError("dantzig_selector: could not construct a strictly "
                               "feasible start");
    Vector u = 0.95 * x.cwiseAbs() + Vector::Constant(n, 0.10 * x.cwiseAbs().maxCoeff());

    Vector fu1 = x - u;
    Vector fu2 = -x - u;
    Vector fe1 = r.array() - gamma;
    Vector fe2 = -r.array() - gamma;
    Vector lu1 = -fu1.cwiseInverse();
    Vector lu2 = -fu2.cwiseInverse();
    Vector le1 = -fe1.cwiseInverse();
    Vector le2 = -fe2.cwiseInverse();

    const double mu = 10.0;
    const double alpha = 0.01;
    const double beta = 0.5;
    const int max_iters = 120;
    const double gap_tol = 1e-10;

    for (int it = 0; it < max_iters; ++it) {
        const double sdg = -(fu1.dot(lu1) + fu2.dot(lu2) + fe1.dot(le1) + fe2.dot(le2));
        const double obj = u.sum();
        if (sdg < gap_tol * std::max(1.0, std::abs(obj))) {
            est.h_hat = x;
            est.iterations_used = it;
            return est;
        }
        const double tau = mu * 4.0 * static_cast<double>(n) / sdg;
        const double inv_tau = 1.0 / tau;

        const double resnorm =
            residual_norm(q, lu1, lu2, le1, le2, fu1, fu2, fe1, fe2, inv_tau);

        const Vector su1 = lu1.cwiseQuotient(fu1); // negative
        const Vector su2 = lu2.cwiseQuotient(fu2);
        const Vector se1 = le1.cwiseQuotient(fe1);
        const Vector se2 = le2.cwiseQuotient(fe2);
        const Vector sig1 = -(su1 + su2);
        const Vector sig2 = su1 - su2;
        const Vector siga = -(se1 + se2);
        const Vector sigx = sig1 - sig2.cwiseAbs2().cwiseQuotient(sig1);

        const Vector w1 = inv_tau * (q * (fe1.cwiseInverse() - fe2.cwiseInverse()) +
                                     fu1.cwiseInverse() - fu2.cwiseInverse());
        const Vector w2 = Vector::Constant(n, -1.0) -
                          inv_tau * (fu1.cwiseInverse() + fu2.cwiseInverse());
        const Vector w1p = w1 - sig2.cwiseQuotient(sig1).cwiseProduct(w2);

        Matrix hp = q * siga.asDiagonal() * q;
        hp += Matrix(sigx.asDiagonal());
        // hp is SPD by construction but can become badly scaled once the
        // barrier sharpens; retry with growing diagonal damping.
        Vector dx;
        double damp = 0.0;
        for (int attempt = 0;; ++attempt) {
            Eigen::LDLT<Matrix> newton(attempt == 0 ? hp
                                                    : Matrix(hp + damp * Matrix::Identity(n, n)));
            if (newton.info() == Eigen::Success) {
                dx = newton.solve(w1p);
                if (dx.allFinite()) break;
            }
            if (attempt == 3)
                throw ConvergenceError("dantzig_selector: Newton system factorization failed "
                                       "at iteration " + std::to_string(it));
            damp = (damp == 0.0) ? 1e-12 * hp.diagonal().maxCoeff() : damp * 1e3;
        }
        const Vector qdx = q * dx;
        const Vector du = (w2 - sig2.cwiseProduct(dx)).cwiseQuotient(sig1);

        const Vector dlu1 = -su1.cwiseProduct(dx - du) - lu1 - inv_tau * fu1.cwiseInverse();
        const Vector dlu2 = su2.cwiseProduct(dx + du) - lu2 - inv_tau * fu2.cwiseInverse();
        const Vector dle1 = -se1.cwiseProduct(qdx) - le1 - inv_tau * fe1.cwiseInverse();
        const Vector dle2 = se2.cwiseProduct(qdx) - le2 - inv_tau * fe2.cwiseInverse();

        // Longest step keeping duals positive and constraints negative.
        double s = 1.0;
        clip_positive(lu1, dlu1, s);
        clip_positive(lu2, dlu2, s);
        clip_positive(le1, dle1, s);
        clip_positive(le2, dle2, s);
        const Vector dfu1 = dx - du;
        const Vector dfu2 = -dx - du;
        clip_positive(-fu1, -dfu1, s);
        clip_positive(-fu2, -dfu2, s);
        clip_positive(-fe1, -qdx, s);
        clip_positive(-fe2, qdx, s);
        s *= 0.99;

        bool accepted = false;
        Vector xp, up, rp, fu1p, fu2p, fe1p, fe2p, lu1p, lu2p, le1p, le2p;
        for (int back = 0; back < 40; ++back) {
            xp = x + s * dx;
            up = u + s * du;
            rp = r + s * qdx;
            lu1p = lu1 + s * dlu1;
            lu2p = lu2 + s * dlu2;
            le1p = le1 + s * dle1;
            le2p = le2 + s * dle2;
            fu1p = xp - up;
            fu2p = -xp - up;
            fe1p = rp.array() - gamma;
            fe2p = -rp.array() - gamma;
            const double next =
                residual_norm(q, lu1p, lu2p, le1p, le2p, fu1p, fu2p, fe1p, fe2p, inv_tau);
            if (next <= (1.0 - alpha * s) * resnorm) {
                accepted = true;
                break;
            }
            s *= beta;
        }
        if (!accepted)
            throw ConvergenceError("dantzig_selector: line search stalled at iteration " +
                                   std::to_string(it) + ", gap " + std::to_string(sdg));
        x = xp;
        u = up;
        r = rp;
        fu1 = fu1p;
        fu2 = fu2p;
        fe1 = fe1p;
        fe2 = fe2p;
        lu1 = lu1p;
        lu2 = lu2p;
        le1 = le1p;
        le2 = le2p;
    }
    throw ConvergenceError("dantzig_selector: iteration cap reached, final gap " +
                           std::to_string(-(fu1.dot(lu1) + fu2.dot(lu2) + fe1.dot(le1) +
                                            fe2.dot(le2))));
}

} // namespace sparsechan
