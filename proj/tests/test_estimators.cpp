#include <doctest.h>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "sparsechan/errors.hpp"
#include "sparsechan/estimators.hpp"

using namespace sparsechan;

namespace {

Matrix orthonormal_columns(int rows, int cols, std::uint64_t seed) {
    RngStream rng(seed);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1, 1);
    Eigen::HouseholderQR<Matrix> qr(m);
    return Matrix(qr.householderQ()).leftCols(cols);
}

ConvolutionBasis identity_basis(int n) {
    TrainingSequence c;
    c.symbols = Vector::Ones(1);
    return build_convolution(c, n, false);
}

} // namespace

TEST_CASE("sliding correlator is exact on orthogonal columns") {
    const ConvolutionBasis basis = identity_basis(3); // columns are unit vectors
    ReceivedSignal r;
    r.samples = Vector(3);
    r.samples << 0.7, 0.0, -0.2;
    const Estimate est = sliding_correlator(basis, r);
    CHECK((est.h_hat - r.samples).lpNorm<Eigen::Infinity>() < 1e-15);

    ReceivedSignal zero;
    zero.samples = Vector::Zero(3);
    CHECK(sliding_correlator(basis, zero).h_hat == Vector::Zero(3));
}

TEST_CASE("sliding correlator matches hand dot products") {
    TrainingSequence c;
    c.symbols = Vector(4);
    c.symbols << 1, -1, 1, 1;
    const ConvolutionBasis basis = build_convolution(c, 2, false);
    ReceivedSignal r;
    r.samples = Vector(5);
    r.samples << 0.3, -0.1, 0.8, 0.2, -0.4;
    const Estimate est = sliding_correlator(basis, r);
    const double h0 = (0.3 * 1 + -0.1 * -1 + 0.8 * 1 + 0.2 * 1) / 4.0;
    const double h1 = (-0.1 * 1 + 0.8 * -1 + 0.2 * 1 + -0.4 * 1) / 4.0;
    CHECK(est.h_hat(0) == doctest::Approx(h0).epsilon(1e-12));
    CHECK(est.h_hat(1) == doctest::Approx(h1).epsilon(1e-12));
}

TEST_CASE("sliding correlator rejects zero-norm columns") {
    ConvolutionBasis broken;
    broken.m = Matrix::Zero(3, 2);
    broken.m(0, 0) = 1.0;
    broken.delay_spread = 2;
    ReceivedSignal r;
    r.samples = Vector::Zero(3);
    CHECK_THROWS_AS(sliding_correlator(broken, r), SingularityError);
}

TEST_CASE("max_energy is the adjoint applied to the measurements") {
    EffectiveMatrix a;
    a.m = Matrix(2, 2);
    a.m << 1, 2, 3, 4;
    CHECK(max_energy(a, Vector::Zero(2)).h_hat == Vector::Zero(2));

    Vector y(2);
    y << 1, -1;
    const Estimate est = max_energy(a, y);
    CHECK(est.h_hat(0) == doctest::Approx(1 * 1 + 3 * -1).epsilon(1e-15));
    CHECK(est.h_hat(1) == doctest::Approx(2 * 1 + 4 * -1).epsilon(1e-15));

    CHECK_THROWS_AS(max_energy(a, Vector::Zero(3)), DimensionError);
}

TEST_CASE("max_energy inverts orthonormal sensing") {
    EffectiveMatrix a;
    a.m = orthonormal_columns(8, 4, 21);
    Vector h(4);
    h << 0.5, 0, -1, 0.25;
    const Estimate est = max_energy(a, a.m * h);
    CHECK((est.h_hat - h).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("hn_threshold evaluates the decision-step formula") {
    // frozen arithmetic: 2 ln2 ln100 = 6.3841..., eps(sigma=0) = 4 at M=200
    const double g = hn_threshold(200, 100, 0.0, 12.41);
    CHECK(g == doctest::Approx(0.358575).epsilon(1e-4));
    // scales as sqrt(1/lambda)
    CHECK(hn_threshold(200, 100, 0.0, 4 * 12.41) == doctest::Approx(g / 2).epsilon(1e-12));
    // grows linearly in (B + sigma)
    const double b = 1.0 / std::sqrt(200.0);
    const double g1 = hn_threshold(200, 100, 0.1, 12.41);
    CHECK(g1 / g == doctest::Approx((b + 0.1) / b).epsilon(1e-9));

    CHECK_THROWS_AS(hn_threshold(200, 100, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(hn_threshold(200, 100, -0.1, 1.0), DomainError);
}

TEST_CASE("calibrate_threshold_model reproduces the printed constants") {
    EigFit fit;
    fit.a0 = 18.81;
    fit.a1 = -0.064;
    fit.m = 200;
    const ThresholdModel model = calibrate_threshold_model(200, 100, fit);
    CHECK(model.b == doctest::Approx(1.4397).epsilon(0.005));
    CHECK(model.a == doctest::Approx(0.0707).epsilon(0.001));
    CHECK(model.g(0.0) == doctest::Approx(1.4397 * 0.0707).epsilon(0.006));

    // a is definitional for any M
    for (const int m : {50, 100, 400})
        CHECK(calibrate_threshold_model(m, 100, fit).a ==
              doctest::Approx(1.0 / std::sqrt(static_cast<double>(m))).epsilon(1e-12));

    EigFit bad;
    bad.a0 = 1.0;
    bad.a1 = -1.0;
    CHECK_THROWS_AS(calibrate_threshold_model(200, 100, bad), DomainError);
}

TEST_CASE("model built from a measured eigenvalue agrees with the fitted one") {
    RngStream rng(22);
    double lam_meas = 0.0;
    for (int t = 0; t < 5; ++t) {
        RngStream sub = rng.fork(static_cast<std::uint64_t>(t));
        lam_meas += spectral_top(rademacher_matrix(50, 299, sub, true));
    }
    lam_meas /= 5.0;
    RngStream fit_rng(220);
    const EigFit fit =
        lambda_fit(200, {50, 75, 100, 125, 150}, KRule::half_n(), 5, fit_rng);
    const double b_fit = calibrate_threshold_model(200, 100, fit).b;
    const double b_meas = std::sqrt(2.0 * std::log(2.0) * 50.0 * std::log(100.0)) / lam_meas;
    CHECK(std::abs(b_meas - b_fit) / b_fit < 0.10);
}

TEST_CASE("hn_recover trivial fixed points") {
    Matrix a = Matrix::Identity(4, 4);
    HNConfig cfg;
    cfg.lambda = 1.0;
    const Estimate zero = hn_recover(a, Vector::Zero(4), 0.5, cfg);
    CHECK(zero.h_hat == Vector::Zero(4));
    CHECK(zero.iterations_used == 1);

    // started at the exact solution with a threshold below the taps
    Vector h(4);
    h << 0.9, 0, -0.8, 0;
    const Estimate warm = hn_recover(a, a * h, 0.5, cfg, h);
    CHECK(warm.h_hat == h);
    CHECK(warm.iterations_used == 1);
}

TEST_CASE("hn_recover finds the unique sparse solution on a square system") {
    RngStream rng(23);
    const Matrix a = rademacher_matrix(8, 8, rng, true);
    Vector h = Vector::Zero(8);
    h(5) = 0.7;
    const Vector y = a * h;

    // exhaustive support search confirms index 5 is the only 1-sparse fit
    int solutions = 0;
    for (int j = 0; j < 8; ++j) {
        const double coef = a.col(j).dot(y) / a.col(j).squaredNorm();
        if ((y - coef * a.col(j)).norm() < 1e-9) ++solutions;
    }
    CHECK(solutions == 1);

    HNConfig cfg;
    cfg.lambda = spectral_top(a) * (1 + 1e-8);
    cfg.max_iters = 2000;
    const Estimate est = hn_recover(a, y, 1e-4, cfg);
    CHECK((est.h_hat - h).norm() < 1e-6);
}

TEST_CASE("hn_recover thresholding postcondition is exact") {
    RngStream rng(24);
    const Matrix a = rademacher_matrix(12, 20, rng, true);
    Vector y(12);
    for (int i = 0; i < 12; ++i) y(i) = rng.uniform(-1, 1);
    HNConfig cfg;
    cfg.lambda = spectral_top(a) * (1 + 1e-8);
    cfg.divisor_p = 3.0;
    const double g = 0.09;
    const Estimate est = hn_recover(a, y, g, cfg);
    for (int j = 0; j < 20; ++j)
        if (est.h_hat(j) != 0.0) CHECK(std::abs(est.h_hat(j)) >= g / cfg.divisor_p);
}

TEST_CASE("pure gradient iterations never increase the residual") {
    RngStream rng(25);
    const Matrix a = rademacher_matrix(10, 6, rng, true);
    Vector y(10);
    for (int i = 0; i < 10; ++i) y(i) = rng.uniform(-1, 1);
    HNConfig cfg;
    cfg.lambda = spectral_top(a) * (1 + 1e-8);
    cfg.fixpoint_tol = 0.0; // run exactly max_iters
    double prev = y.norm();
    for (int t = 1; t <= 12; ++t) {
        cfg.max_iters = t;
        const Estimate est = hn_recover(a, y, 0.0, cfg);
        const double res = (y - a * est.h_hat).norm();
        CHECK(res <= prev + 1e-12);
        prev = res;
    }
}

TEST_CASE("hn_recover reports divergence when lambda is under-estimated") {
    RngStream rng(26);
    const Matrix a = rademacher_matrix(6, 6, rng, true);
    Vector y(6);
    for (int i = 0; i < 6; ++i) y(i) = rng.uniform(-1, 1);
    HNConfig cfg;
    cfg.lambda = 1e-9;
    cfg.max_iters = 5000;
    CHECK_THROWS_AS(hn_recover(a, y, 0.0, cfg), DivergenceError);
}

TEST_CASE("threshold_set hand case and grid shapes") {
    Estimate initial;
    initial.h_hat = Vector(3);
    initial.h_hat << 0.9, -0.3, 0.1;
    ThresholdModel model;
    model.a = 1.0;
    model.b = 1.0;
    const ThresholdSet ts = threshold_set(initial, model, 0.0, 2.0, 3);
    // G = (1, 2, 3), delta = 0.3, t = (0.1, 0.4, 0.9)
    REQUIRE(ts.t.size() == 3);
    CHECK(ts.t[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ts.t[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(ts.t[2] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(ts.delta == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("degenerate sigma range gives the uniform grid") {
    Estimate initial;
    initial.h_hat = Vector(2);
    initial.h_hat << 0.5, -1.0;
    ThresholdModel model;
    model.a = 0.2;
    model.b = 3.0;
    const ThresholdSet ts = threshold_set(initial, model, 0.4, 0.4, 4);
    for (int i = 0; i < 4; ++i)
        CHECK(ts.t[static_cast<std::size_t>(i)] ==
              doctest::Approx((i + 1) * 0.25).epsilon(1e-12));
}

TEST_CASE("threshold_set spans 21 positive non-decreasing values under the default setup") {
    Estimate initial;
    initial.h_hat = Vector(5);
    initial.h_hat << 0.2, -0.9, 0.05, 0.4, -0.1;
    EigFit fit;
    fit.a0 = 18.81;
    fit.a1 = -0.064;
    const ThresholdModel model = calibrate_threshold_model(200, 100, fit);
    const ThresholdSet ts = threshold_set(initial, model, 0.01, 0.3, 21);
    REQUIRE(ts.t.size() == 21);
    CHECK(ts.t.front() > 0.0);
    for (std::size_t i = 1; i < 21; ++i) CHECK(ts.t[i] >= ts.t[i - 1]);
    for (const double t : ts.t) CHECK(t <= 0.9 + 1e-12);
}

TEST_CASE("threshold_set input validation") {
    Estimate zero;
    zero.h_hat = Vector::Zero(4);
    ThresholdModel model;
    model.a = 0.1;
    model.b = 1.0;
    CHECK_THROWS_AS(threshold_set(zero, model, 0.0, 1.0, 5), DomainError);
    Estimate ok;
    ok.h_hat = Vector::Ones(4);
    CHECK_THROWS_AS(threshold_set(ok, model, 1.0, 0.5, 5), DomainError);
    CHECK_THROWS_AS(threshold_set(ok, model, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("pea_select_index picks the flattest non-zero step") {
    // e = (5, 1.2, 1.1): derivatives (-3.8, -0.1), the 0.1 step wins
    const auto [idx, fallback] = pea_select_index({5.0, 1.2, 1.1});
    CHECK(idx == 2);
    CHECK_FALSE(fallback);
}

TEST_CASE("pea_select_index prefers the first stable cluster") {
    // a bit-identical pair (zero derivative) beats a later small step
    const auto [idx, fallback] = pea_select_index({3.0, 1.0, 1.0, 0.5, 0.5001});
    CHECK(idx == 2);
    CHECK_FALSE(fallback);
}

TEST_CASE("pea_select_index signals all-identical traces") {
    const auto [idx, fallback] = pea_select_index({2.0, 2.0, 2.0});
    CHECK(fallback);
    CHECK(idx == 0);
}

TEST_CASE("pea_cs fallback returns the smallest-threshold estimate") {
    RngStream rng(27);
    const Matrix a = rademacher_matrix(6, 10, rng, true);
    ThresholdSet ts;
    ts.t = {0.1, 0.2, 0.3};
    HNConfig cfg;
    cfg.lambda = spectral_top(a) * (1 + 1e-8);
    const auto [est, trace] = pea_cs(a, Vector::Zero(6), ts, cfg);
    CHECK(trace.fallback);
    CHECK(trace.chosen_index == 0);
    CHECK(est.h_hat == Vector::Zero(10));
    const Estimate direct = hn_recover(a, Vector::Zero(6), ts.t[0], cfg);
    CHECK(est.h_hat == direct.h_hat);
}

TEST_CASE("pea_cs result equals the recovery at the chosen threshold bit-for-bit") {
    RngStream rng(28);
    const TrainingSequence c = gen_training(40, rng);
    const ConvolutionBasis basis = build_convolution(c, 20, true);
    const SparseChannel h = gen_sparse_channel(20, 2, AmplitudeLaw::kUniform, rng);
    const MeasurementMatrix phi = gen_measurement(12, 59, rng);
    const EffectiveMatrix a = effective(phi, basis);
    const ReceivedSignal r = transmit(basis, h, 0.05, rng);
    const Vector y = project(phi, r);
    const Estimate initial = sliding_correlator(basis, r);

    EigFit fit;
    fit.a0 = 18.81;
    fit.a1 = -0.064;
    const ThresholdModel model = calibrate_threshold_model(40, 20, fit);
    const ThresholdSet ts = threshold_set(initial, model, 0.01, 0.2, 9);
    HNConfig cfg;
    cfg.lambda = spectral_top(a.m) * (1 + 1e-8);
    cfg.fixpoint_tol = 1e-10;

    const auto [est, trace] = pea_cs(a.m, y, ts, cfg, initial.h_hat);
    const Estimate direct = hn_recover(a.m, y, ts.t[static_cast<std::size_t>(trace.chosen_index)],
                                       cfg, initial.h_hat);
    CHECK(est.h_hat == direct.h_hat);
    CHECK(trace.errors.size() == 9);
    CHECK(trace.derivative.size() == 8);
}

TEST_CASE("matching pursuit single-atom and trivial cases") {
    Matrix dict = orthonormal_columns(6, 4, 29);
    const Vector y = 3.0 * dict.col(2);
    const Estimate est = matching_pursuit(dict, y, 1);
    CHECK(est.h_hat(2) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(est.h_hat.lpNorm<1>() == doctest::Approx(3.0).epsilon(1e-10));

    CHECK(matching_pursuit(dict, Vector::Zero(6), 3).h_hat == Vector::Zero(4));
}

TEST_CASE("matching pursuit equals projection on orthonormal columns") {
    const Matrix dict = orthonormal_columns(10, 5, 30);
    Vector coef(5);
    coef << 2.0, 0.0, 0.0, 1.0, 0.0;
    const Vector y = dict * coef;
    const Estimate est = matching_pursuit(dict, y, 2);
    CHECK((est.h_hat - coef).lpNorm<Eigen::Infinity>() < 1e-10);

    // any sparsity >= the true one still recovers exactly
    RngStream rng(31);
    for (int t = 0; t < 5; ++t) {
        Vector c2 = Vector::Zero(5);
        c2(static_cast<Eigen::Index>(rng.below(5))) = rng.uniform(0.2, 1.0);
        c2(static_cast<Eigen::Index>(rng.below(5))) = rng.uniform(-1.0, -0.2);
        const Estimate e2 = matching_pursuit(dict, dict * c2, 5);
        CHECK((e2.h_hat - c2).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("matching pursuit accumulates repeated picks") {
    Matrix dict(4, 2);
    dict << 1, 0.9, 0, 0.1, 0, 0, 0, 0;
    dict.col(1).normalize();
    const Vector y = 2.0 * dict.col(0);
    const Estimate est = matching_pursuit(dict, y, 4);
    // after several greedy picks the reconstruction approaches y
    CHECK((dict * est.h_hat - y).norm() < 0.2);
}

TEST_CASE("initial estimates agree on the dominant tap") {
    RngStream rng(32);
    for (int t = 0; t < 10; ++t) {
        const TrainingSequence c = gen_training(64, rng);
        const ConvolutionBasis basis = build_convolution(c, 24, true);
        SparseChannel h;
        h.delay_spread = 24;
        h.h = Vector::Zero(24);
        const int peak = static_cast<int>(rng.below(24));
        const int minor1 = (peak + 7) % 24;
        const int minor2 = (peak + 13) % 24;
        h.support = {peak, minor1, minor2};
        std::sort(h.support.begin(), h.support.end());
        h.h(peak) = rng.rademacher();        // dominant tap at full amplitude
        h.h(minor1) = 0.3 * rng.rademacher();
        h.h(minor2) = 0.2 * rng.rademacher();
        const MeasurementMatrix phi = gen_measurement(32, 87, rng);
        const EffectiveMatrix a = effective(phi, basis);
        RngStream quiet(0);
        const ReceivedSignal r = transmit(basis, h, 0.0, quiet);
        const Vector y = project(phi, r);
        Eigen::Index arg_slide = 0, arg_me = 0;
        sliding_correlator(basis, r).h_hat.cwiseAbs().maxCoeff(&arg_slide);
        max_energy(a, y).h_hat.cwiseAbs().maxCoeff(&arg_me);
        CHECK(arg_slide == arg_me);
        CHECK(arg_slide == peak);
    }
}
