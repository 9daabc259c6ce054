#include "drkf/simulate.hpp"

#include <stdexcept>

namespace drkf {

std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

Vec standard_normal(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    return v;
}

Trajectory simulate_nominal(const GlobalModel& model, const Vec& xhat0, const Mat& V0, int T,
                            std::mt19937_64& rng, const Vec* r) {
    const int n = model.n();
    const int noise_dim = static_cast<int>(model.gamma_B.cols());
    Trajectory traj;
    traj.x.reserve(T + 1);
    traj.y.reserve(T + 1);

    const Mat V0_sqrt = psd_sqrt(V0, "initial covariance");
    Vec x = xhat0 + V0_sqrt * standard_normal(n, rng);
    for (int t = 0; t <= T; ++t) {
        const Vec u = standard_normal(noise_dim, rng);
        traj.x.push_back(x);
        traj.y.push_back(model.C * x + model.gamma_D * u);
        Vec x_next = model.A * x + model.gamma_B * u;
        if (r) x_next += *r;
        x = std::move(x_next);
    }
    return traj;
}

Trajectory simulate_lf(const std::vector<LfStage>& stages, const Vec& xhat0, const Mat& V0,
                       int T, std::mt19937_64& rng, const Vec* r) {
    if (static_cast<int>(stages.size()) < T) {
        throw std::invalid_argument("worst-case model stages do not cover the horizon");
    }
    const int n = static_cast<int>(xhat0.size());
    Trajectory traj;
    traj.x.reserve(T + 1);
    traj.y.reserve(T + 1);
    traj.xi.reserve(T + 1);

    const Mat V0_sqrt = psd_sqrt(V0, "initial covariance");
    const Vec x0 = xhat0 + V0_sqrt * standard_normal(n, rng);
    Vec xi(2 * n);
    xi.head(n) = x0;
    xi.tail(n) = x0 - xhat0;

    for (int t = 0; t <= T; ++t) {
        const LfStage& stage = stages[std::min<std::size_t>(t, stages.size() - 1)];
        const Vec eps = standard_normal(static_cast<int>(stage.B_lf.cols()), rng);
        traj.xi.push_back(xi);
        traj.x.push_back(xi.head(n));
        traj.y.push_back(stage.C_lf * xi + stage.D_lf * eps);
        Vec xi_next = stage.A_lf * xi + stage.B_lf * eps;
        if (r) xi_next.head(n) += *r;
        xi = std::move(xi_next);
    }
    return traj;
}

namespace {

// Cell-wise compensated accumulation into sum with carry buffer comp.
void kahan_add(Mat& sum, Mat& comp, Eigen::Index i, Eigen::Index j, double v) {
    const double y = v - comp(i, j);
    const double t = sum(i, j) + y;
    comp(i, j) = (t - sum(i, j)) - y;
    sum(i, j) = t;
}

}  // namespace

std::vector<ErrorTrace> run_filter_bank(const GlobalModel& model, const SensorNetwork& net,
                                        const std::vector<LocalModel>& locals,
                                        const std::vector<Trajectory>& trajectories,
                                        const std::vector<FilterConfig>& configs,
                                        const Vec& xhat0, const Mat& V0, const Vec* r) {
    if (trajectories.empty()) throw std::invalid_argument("no trajectories given");
    const int T = static_cast<int>(trajectories.front().x.size()) - 1;
    const int n = model.n();
    const int N = net.N;

    struct Accumulator {
        Mat sq_sum, sq_comp;                  // (T+1) x N
        std::vector<Mat> err_sum, err_comp;   // per node: n x (T+1)
    };
    std::vector<Accumulator> acc(configs.size());
    for (auto& a : acc) {
        a.sq_sum = Mat::Zero(T + 1, N);
        a.sq_comp = Mat::Zero(T + 1, N);
        a.err_sum.assign(N, Mat::Zero(n, T + 1));
        a.err_comp.assign(N, Mat::Zero(n, T + 1));
    }

    for (const Trajectory& traj : trajectories) {
        if (static_cast<int>(traj.x.size()) != T + 1) {
            throw std::invalid_argument("trajectories must share one horizon");
        }
        for (size_t ci = 0; ci < configs.size(); ++ci) {
            const FilterConfig& cfg = configs[ci];
            const Tolerance c(cfg.c);
            Accumulator& a = acc[ci];

            auto record = [&](int t, int k, const Vec& xhat_k) {
                const Vec err = traj.x[t] - xhat_k;
                kahan_add(a.sq_sum, a.sq_comp, t, k, err.squaredNorm());
                for (int i = 0; i < n; ++i) {
                    kahan_add(a.err_sum[k], a.err_comp[k], i, t, err(i));
                }
            };

            if (cfg.centralized) {
                RobustFilterState state = make_filter_state(xhat0, V0);
                for (int k = 0; k < N; ++k) record(0, k, state.xhat);
                for (int t = 0; t < T; ++t) {
                    state = robust_predict_step(model, state, traj.y[t], c, r);
                    for (int k = 0; k < N; ++k) record(t + 1, k, state.xhat);
                }
            } else {
                NetworkFilterState state = make_network_state(N, xhat0, V0);
                for (int k = 0; k < N; ++k) record(0, k, state.xhat[k]);
                for (int t = 0; t < T; ++t) {
                    dkf_step(state, model, locals, cfg.weights, traj.y[t], c, r);
                    for (int k = 0; k < N; ++k) record(t + 1, k, state.xhat[k]);
                }
            }
        }
    }

    const double M = static_cast<double>(trajectories.size());
    std::vector<ErrorTrace> traces;
    traces.reserve(configs.size());
    for (size_t ci = 0; ci < configs.size(); ++ci) {
        ErrorTrace trace;
        trace.label = configs[ci].label;
        trace.runs = static_cast<int>(trajectories.size());
        trace.msd_node = acc[ci].sq_sum / M;
        trace.mean_err.reserve(N);
        for (int k = 0; k < N; ++k) trace.mean_err.push_back(acc[ci].err_sum[k] / M);
        traces.push_back(std::move(trace));
    }
    return traces;
}

SteadyMsd empirical_msd(const ErrorTrace& trace, int t_begin, int t_end) {
    if (t_begin < 0 || t_end > trace.horizon() || t_begin > t_end) {
        throw std::invalid_argument("steady-state window outside the horizon");
    }
    const int N = trace.nodes();
    SteadyMsd out;
    out.per_node = Vec::Zero(N);
    for (int k = 0; k < N; ++k) {
        KahanSum s;
        for (int t = t_begin; t <= t_end; ++t) s.add(trace.msd_node(t, k));
        out.per_node(k) = s.value() / (t_end - t_begin + 1);
    }
    out.average = out.per_node.mean();
    return out;
}

}  // namespace drkf
