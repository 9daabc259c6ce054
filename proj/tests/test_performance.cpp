#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "drkf/performance.hpp"

using namespace drkf;

namespace {

GlobalModel planar_model() {
    Mat A(2, 2);
    A << 0.9, 0.15, 0.0, 0.85;
    Mat C(1, 2), D(1, 1);
    C << 1.0, 0.3;
    D << 0.8;
    return build_global_model(A, 0.5 * Mat::Identity(2, 2), {NodeModel::from_cd(C, D)});
}

struct LineSetup {
    GlobalModel global;
    SensorNetwork network;
    std::vector<LocalModel> locals;
};

LineSetup line3_setup() {
    Eigen::MatrixXi j(3, 3);
    j << 1, 1, 0,
         1, 1, 1,
         0, 1, 1;
    LineSetup s;
    s.network = SensorNetwork::from_adjacency(j);
    Mat A(2, 2);
    A << 0.9, 0.1, -0.05, 0.8;
    std::vector<NodeModel> nodes;
    Mat C1(1, 2), C2(1, 2), C3(1, 2), D1(1, 1);
    C1 << 1.0, 0.0;
    C2 << 0.0, 1.0;
    C3 << 1.0, 1.0;
    D1 << 1.0;
    nodes.push_back(NodeModel::from_cd(C1, D1));
    nodes.push_back(NodeModel::from_cd(C2, 0.8 * D1));
    nodes.push_back(NodeModel::from_cd(C3, 1.2 * D1));
    s.global = build_global_model(A, 0.4 * Mat::Identity(2, 2), nodes);
    s.locals = build_all_local_models(s.network, nodes);
    return s;
}

}  // namespace

TEST_CASE("single node map reduces to the closed-loop filter matrix") {
    const GlobalModel m = planar_model();
    const SensorNetwork net = SensorNetwork::single();
    const std::vector<LocalModel> locals = build_all_local_models(net, m.nodes);
    const DiffusionWeights w{Mat::Ones(1, 1)};

    const GainSchedule s = forward_gain_sweep(m, Tolerance(0.02), Mat::Identity(2, 2), 3);
    const BackwardSweep b = backward_omega_sweep(m, s);
    const LfStage stage = assemble_lf_model(m, s, b, 1);

    // V_{1,t} must match the centralized sweep at the same time for the
    // identity A (V^{-1}+S)^{-1} V^{-1} = A - G C to apply.
    const std::vector<Mat> V{s.V[1]};
    const ErrorDynamics dyn = assemble_error_dynamics(net, m, locals, w, V, stage);

    const Mat expected = m.A - s.G[1] * m.C;
    CHECK((dyn.F.topLeftCorner(2, 2) - expected).norm() <= 1e-12);
    // structure: lower-left block of F is exactly zero
    CHECK(dyn.F.bottomLeftCorner(2, 2).isZero(0.0));
}

TEST_CASE("one-node wrapper reproduces the centralized error covariance") {
    // With a single node holding every measurement and the same tolerance,
    // the network error block must equal the centralized e-block exactly.
    const GlobalModel m = planar_model();
    const SensorNetwork net = SensorNetwork::single();
    const std::vector<LocalModel> locals = build_all_local_models(net, m.nodes);
    const DiffusionWeights w{Mat::Ones(1, 1)};
    const int T = 40;
    const Tolerance c(0.03);

    const GainSchedule s = forward_gain_sweep(m, c, Mat::Identity(2, 2), T);
    const BackwardSweep b = backward_omega_sweep(m, s);
    const std::vector<LfStage> stages = synthesize_lf_model(m, s, b);

    std::vector<ErrorDynamics> dyn;
    for (int t = 0; t < T; ++t) {
        dyn.push_back(assemble_error_dynamics(net, m, locals, w, {s.V[t]}, stages[t]));
    }
    const PerformanceTrace trace = lyapunov_sweep(dyn, init_Q0(Mat::Identity(2, 2), 1), 2, 1);

    const Mat& q = trace.Q_final;
    CHECK((q.topLeftCorner(2, 2) - q.bottomRightCorner(2, 2)).norm() <=
          1e-10 * q.bottomRightCorner(2, 2).norm());
    CHECK((q.topRightCorner(2, 2) - q.bottomRightCorner(2, 2)).norm() <=
          1e-10 * q.bottomRightCorner(2, 2).norm());
}

TEST_CASE("c = 0 decouples node errors from the centralized error block") {
    const LineSetup s = line3_setup();
    const GainSchedule sched =
        forward_gain_sweep(s.global, Tolerance(0.0), Mat::Identity(2, 2), 3);
    const BackwardSweep b = backward_omega_sweep(s.global, sched);
    const LfStage stage = assemble_lf_model(s.global, sched, b, 1);
    const DiffusionWeights w = build_diffusion_weights(s.network, WeightRule::Degree);
    const std::vector<Mat> V(3, Mat::Identity(2, 2));
    const ErrorDynamics dyn = assemble_error_dynamics(s.network, s.global, s.locals, w, V, stage);
    CHECK(dyn.F.topRightCorner(6, 2).norm() <= 1e-13);  // H = 0 kills the coupling
    CHECK(dyn.F.bottomLeftCorner(2, 6).isZero(0.0));
}

TEST_CASE("initial joint second moment") {
    Mat V0(1, 1);
    V0 << 2.5;
    const Mat q1 = init_Q0(V0, 1);
    REQUIRE(q1.rows() == 2);
    CHECK(q1(0, 0) == 2.5);
    CHECK(q1(0, 1) == 2.5);
    CHECK(q1(1, 0) == 2.5);
    CHECK(q1(1, 1) == 2.5);

    const Mat q2 = init_Q0(Mat::Identity(2, 2), 2);
    REQUIRE(q2.rows() == 6);
    CHECK(numerical_rank(q2) == 2);       // every block is the same V0
    CHECK(min_eigenvalue(q2) >= -1e-12);  // Gram structure
}

TEST_CASE("lyapunov sweep basics") {
    // F = 0 keeps only the injected noise
    std::vector<ErrorDynamics> zero_stage{{Mat::Zero(2, 2), Mat::Ones(2, 1)}};
    const PerformanceTrace t0 = lyapunov_sweep(zero_stage, Mat::Zero(2, 2), 1, 1);
    CHECK((t0.Q_final - Mat::Ones(2, 2)).norm() == 0.0);

    // scalar geometric series on the node block: Q(0,0) -> 1/(1 - 0.25) = 4/3
    ErrorDynamics twin;
    twin.F = Mat::Zero(2, 2);
    twin.F(0, 0) = 0.5;
    twin.F(1, 1) = 0.5;
    twin.G = Mat::Zero(2, 1);
    twin.G(0, 0) = 1.0;
    twin.G(1, 0) = 1.0;
    std::vector<ErrorDynamics> stages(200, twin);
    const PerformanceTrace trace = lyapunov_sweep(stages, Mat::Zero(2, 2), 1, 1);
    CHECK(trace.msd_node(200, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(trace.msd_avg(200) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(trace.q_change.back() <= 1e-10);
}

TEST_CASE("steady stages converge to the fixed-point solution") {
    ErrorDynamics stage;
    stage.F = Mat::Zero(2, 2);
    stage.F << 0.6, 0.1, 0.0, 0.5;
    stage.G = Mat::Identity(2, 2);
    std::vector<ErrorDynamics> stages(300, stage);
    const PerformanceTrace trace = lyapunov_sweep(stages, Mat::Zero(2, 2), 1, 1);
    // fixed point of X = F X F^T + I by long iteration
    Mat X = Mat::Zero(2, 2);
    for (int i = 0; i < 5000; ++i) {
        X = stage.F * X * stage.F.transpose() + Mat::Identity(2, 2);
    }
    CHECK((trace.Q_final - X).norm() <= 1e-10 * X.norm());
}

TEST_CASE("joint second moment stays positive semidefinite along the sweep") {
    const LineSetup s = line3_setup();
    const int T = 50;
    const GainSchedule sched =
        forward_gain_sweep(s.global, Tolerance(0.03), Mat::Identity(2, 2), T);
    const BackwardSweep b = backward_omega_sweep(s.global, sched);
    const std::vector<LfStage> stages = synthesize_lf_model(s.global, sched, b);
    const DiffusionWeights w = build_diffusion_weights(s.network, WeightRule::Degree);

    std::vector<Mat> V(3, Mat::Identity(2, 2));
    Mat Q = init_Q0(Mat::Identity(2, 2), 3);
    for (int t = 0; t < T; ++t) {
        CHECK(min_eigenvalue(Q) >= -1e-10 * Q.trace());
        const ErrorDynamics dyn =
            assemble_error_dynamics(s.network, s.global, s.locals, w, V, stages[t]);
        Q = symmetrized(dyn.F * Q * dyn.F.transpose() + dyn.G * dyn.G.transpose());
        for (int k = 0; k < 3; ++k) {
            V[k] = covariance_step(s.global.A, s.global.BBt(), s.locals[k].S, V[k],
                                   Tolerance(0.03))
                       .V;
        }
    }
    CHECK(min_eigenvalue(Q) >= -1e-10 * Q.trace());
}

TEST_CASE("full pipeline collapse: single node, c = 0 tracks the plain Riccati trace") {
    const GlobalModel m = planar_model();
    const SensorNetwork net = SensorNetwork::single();
    const std::vector<LocalModel> locals = build_all_local_models(net, m.nodes);
    const DiffusionWeights w{Mat::Ones(1, 1)};
    const int T = 30;
    const GainSchedule s = forward_gain_sweep(m, Tolerance(0.0), Mat::Identity(2, 2), T);
    const BackwardSweep b = backward_omega_sweep(m, s);
    const std::vector<LfStage> stages = synthesize_lf_model(m, s, b);
    std::vector<ErrorDynamics> dyn;
    for (int t = 0; t < T; ++t) {
        dyn.push_back(assemble_error_dynamics(net, m, locals, w, {s.V[t]}, stages[t]));
    }
    const PerformanceTrace trace = lyapunov_sweep(dyn, init_Q0(Mat::Identity(2, 2), 1), 2, 1);
    for (int t = 0; t <= T; ++t) {
        CHECK(trace.msd_avg(t) == doctest::Approx(s.V[t].trace()).epsilon(1e-10));
    }
}

TEST_CASE("gaussian_kl closed-form values and properties") {
    Vec zero1 = Vec::Zero(1), one1 = Vec::Ones(1);
    const Mat i1 = Mat::Identity(1, 1);
    CHECK(gaussian_kl(zero1, i1, zero1, i1) == 0.0);
    CHECK(gaussian_kl(zero1, i1, one1, i1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gaussian_kl(zero1, i1, zero1, 2.0 * i1) ==
          doctest::Approx(0.5 * (std::log(2.0) - 0.5)).epsilon(1e-12));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 4);
        Mat a(d, d), b2(d, d);
        for (int i = 0; i < d * d; ++i) {
            a(i / d, i % d) = normal(rng);
            b2(i / d, i % d) = normal(rng);
        }
        const Mat k1 = symmetrized(a * a.transpose()) + 0.2 * Mat::Identity(d, d);
        const Mat k2 = symmetrized(b2 * b2.transpose()) + 0.2 * Mat::Identity(d, d);
        Vec m1(d), m2(d);
        for (int i = 0; i < d; ++i) {
            m1(i) = normal(rng);
            m2(i) = normal(rng);
        }
        const double fwd = gaussian_kl(m1, k1, m2, k2);
        const double bwd = gaussian_kl(m2, k2, m1, k1);
        CHECK(fwd >= 0.0);
        if ((k1 - k2).norm() > 1e-6) CHECK(fwd != bwd);  // asymmetric in general
    }

    Mat bad(1, 1);
    bad << -1.0;
    CHECK_THROWS_AS(gaussian_kl(zero1, bad, zero1, i1), std::runtime_error);
}

TEST_CASE("kl comparison collapses when the tolerance is zero") {
    const LineSetup s = line3_setup();
    Vec xhat(2);
    xhat << 0.2, -0.4;
    const KlComparison d =
        kl_comparison(s.network, s.global, 0, xhat, 0.7 * Mat::Identity(2, 2), Tolerance(0.0));
    CHECK(d.d_local_lf == doctest::Approx(d.d_local_nominal).epsilon(1e-12));
    CHECK(d.d_local_lf > 0.0);  // the local view still misses measurements
}

TEST_CASE("kl comparison is exactly zero when the node sees everything and c = 0") {
    const GlobalModel m = planar_model();
    const SensorNetwork net = SensorNetwork::single();
    Vec xhat(2);
    xhat << 1.0, 0.0;
    const KlComparison d =
        kl_comparison(net, m, 0, xhat, Mat::Identity(2, 2), Tolerance(0.0));
    CHECK(d.d_local_lf <= 1e-13);
    CHECK(d.d_local_nominal <= 1e-13);

    // with c > 0 the local worst-case view coincides with the worst case
    // itself, so only the nominal divergence grows
    const KlComparison d2 =
        kl_comparison(net, m, 0, xhat, Mat::Identity(2, 2), Tolerance(0.3));
    CHECK(d2.d_local_lf <= 1e-13);
    CHECK(d2.d_local_nominal > 1e-4);
}

TEST_CASE("kl comparison favors the worst-case local density for large tolerances") {
    // two scalar nodes, node 0 sees only itself
    Eigen::MatrixXi j = Eigen::MatrixXi::Identity(2, 2);
    const SensorNetwork net = SensorNetwork::from_adjacency(j);
    Mat A(1, 1), B(1, 1), C(1, 1), D(1, 1);
    A << 0.9;
    B << 1.0;
    C << 1.0;
    D << 1.0;
    const GlobalModel m =
        build_global_model(A, B, {NodeModel::from_cd(C, D), NodeModel::from_cd(C, 1.5 * D)});

    Vec xhat = Vec::Zero(1);
    const Mat V = Mat::Identity(1, 1);
    bool crossed = false;
    double at_c = 0.0;
    for (double c = 0.01; c <= 1.0 + 1e-9; c += 0.01) {
        const KlComparison d = kl_comparison(net, m, 0, xhat, V, Tolerance(c));
        if (d.d_local_lf < d.d_local_nominal) {
            crossed = true;
            at_c = c;
            break;
        }
    }
    CHECK(crossed);
    // once crossed, the gap should persist for larger budgets
    for (double c = at_c; c <= 1.0 + 1e-9; c += 0.05) {
        const KlComparison d = kl_comparison(net, m, 0, xhat, V, Tolerance(c));
        CHECK(d.d_local_lf < d.d_local_nominal);
    }
}
