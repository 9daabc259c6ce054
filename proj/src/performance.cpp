#include "drkf/performance.hpp"

#include <cmath>
#include <stdexcept>

namespace drkf {

ErrorDynamics assemble_error_dynamics(const SensorNetwork& net, const GlobalModel& model,
                                      const std::vector<LocalModel>& locals,
                                      const DiffusionWeights& weights,
                                      const std::vector<Mat>& V_node, const LfStage& stage) {
    const int N = net.N;
    const int n = model.n();
    const int pN = model.total_p();
    const int noise_dim = static_cast<int>(stage.Gamma_L.cols());
    if (static_cast<int>(V_node.size()) != N || static_cast<int>(locals.size()) != N) {
        throw std::invalid_argument("per-node inputs do not match the network size");
    }

    // Per node l: gain_core_l = A (V_l^{-1} + S_l)^{-1}; the error transition
    // block is gain_core_l V_l^{-1} and its measurement coupling runs through
    // C_m^T R_m^{-1} D_m of every neighbor m.
    std::vector<Mat> Vinv(N), gain_core(N);
    for (int l = 0; l < N; ++l) {
        Vinv[l] = spd_inverse(V_node[l], "V at node " + std::to_string(l));
        gain_core[l] =
            model.A * spd_inverse(symmetrized(Vinv[l] + locals[l].S),
                                  "information matrix at node " + std::to_string(l));
    }

    // mixed(k, l) = w_lk * gain_core_l  (the W^T (x) I mixing applied to the
    // block-diagonal incremental maps).
    Mat mixed = Mat::Zero(N * n, N * n);
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
            if (weights.W(l, k) != 0.0) {
                mixed.block(k * n, l * n, n, n) = weights.W(l, k) * gain_core[l];
            }
        }
    }

    Mat A_net = Mat::Zero(N * n, N * n);
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < N; ++l) {
            if (weights.W(l, k) != 0.0) {
                A_net.block(k * n, l * n, n, n) = weights.W(l, k) * gain_core[l] * Vinv[l];
            }
        }
    }

    // coupling(l, m) = j_ml * C_m^T R_m^{-1} D_m.
    Mat coupling = Mat::Zero(N * n, pN);
    for (int m = 0; m < N; ++m) {
        const NodeModel& node = model.nodes[m];
        const Mat info_dir =
            node.C.transpose() * spd_solve(node.R, node.D, "R at node " + std::to_string(m));
        for (int l = 0; l < N; ++l) {
            if (net.adjacency(m, l) == 1) {
                coupling.block(l * n, model.y_offset[m], n, node.p()) = info_dir;
            }
        }
    }

    const Mat BM = model.B * stage.M;
    const Mat BN = model.B * stage.N_top;
    Mat B_net = -mixed * (coupling * stage.L);
    Mat C_net = -mixed * (coupling * stage.H);
    for (int k = 0; k < N; ++k) {
        B_net.middleRows(k * n, n) += BN;
        C_net.middleRows(k * n, n) += BM;
    }

    ErrorDynamics dyn;
    dyn.F = Mat::Zero(N * n + n, N * n + n);
    dyn.F.topLeftCorner(N * n, N * n) = A_net;
    dyn.F.topRightCorner(N * n, n) = C_net;
    dyn.F.bottomRightCorner(n, n) = stage.A_err;

    dyn.G = Mat::Zero(N * n + n, noise_dim);
    dyn.G.topRows(N * n) = B_net;
    dyn.G.bottomRows(n) = stage.B_err;
    return dyn;
}

Mat init_Q0(const Mat& V0, int N) {
    if (N < 1) throw std::invalid_argument("node count must be positive");
    const int n = static_cast<int>(V0.rows());
    Mat Q0 = Mat::Zero(N * n + n, N * n + n);
    const Mat V = symmetrized(V0);
    for (int i = 0; i <= N; ++i) {
        for (int j = 0; j <= N; ++j) {
            Q0.block(i * n, j * n, n, n) = V;
        }
    }
    return Q0;
}

PerformanceTrace lyapunov_sweep(const std::vector<ErrorDynamics>& stages, const Mat& Q0,
                                int n, int N) {
    const int T = static_cast<int>(stages.size());
    if (Q0.rows() != N * n + n || Q0.cols() != N * n + n) {
        throw std::invalid_argument("Q0 dimension does not match N and n");
    }

    PerformanceTrace trace;
    trace.msd_node.resize(T + 1, N);
    trace.msd_avg.resize(T + 1);
    trace.var_node.assign(N, Mat::Zero(n, T + 1));
    trace.q_change.reserve(T);

    Mat Q = symmetrized(Q0);
    for (int t = 0; t <= T; ++t) {
        double total = 0.0;
        for (int k = 0; k < N; ++k) {
            const auto block = Q.block(k * n, k * n, n, n);
            trace.var_node[k].col(t) = block.diagonal();
            const double node_msd = block.trace();
            trace.msd_node(t, k) = node_msd;
            total += node_msd;
        }
        trace.msd_avg(t) = total / N;
        if (t < T) {
            const Mat Q_next =
                symmetrized(stages[t].F * Q * stages[t].F.transpose() +
                            stages[t].G * stages[t].G.transpose());
            trace.q_change.push_back((Q_next - Q).norm());
            Q = Q_next;
        }
    }
    trace.Q_final = std::move(Q);
    return trace;
}

double gaussian_kl(const Vec& mu1, const Mat& K1, const Vec& mu2, const Mat& K2) {
    const Eigen::Index d = mu1.size();
    if (mu2.size() != d || K1.rows() != d || K2.rows() != d || K1.cols() != d ||
        K2.cols() != d) {
        throw std::invalid_argument("KL divergence needs matching dimensions");
    }
    Eigen::LLT<Mat> llt1(symmetrized(K1));
    Eigen::LLT<Mat> llt2(symmetrized(K2));
    if (llt1.info() != Eigen::Success) {
        throw std::runtime_error("first covariance is not positive definite");
    }
    if (llt2.info() != Eigen::Success) {
        throw std::runtime_error("second covariance is not positive definite");
    }

    double logdet1 = 0.0;
    double logdet2 = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        logdet1 += 2.0 * std::log(llt1.matrixL()(i, i));
        logdet2 += 2.0 * std::log(llt2.matrixL()(i, i));
    }
    const Vec diff = mu2 - mu1;
    const double trace_term = llt2.solve(K1).trace();
    const double quad = diff.dot(llt2.solve(diff));
    return 0.5 * (trace_term + quad - static_cast<double>(d) + logdet2 - logdet1);
}

namespace {

struct SplitView {
    Mat C_in;      // neighborhood rows
    Mat C_out;     // remaining rows
    Mat R_in;      // block diagonal noise covariance of the neighborhood
    Mat R_out;     // same for the complement
    int rows_in = 0;
    int rows_out = 0;
};

SplitView split_by_neighborhood(const SensorNetwork& net, const GlobalModel& model, int k) {
    SplitView v;
    std::vector<Mat> rin, rout;
    std::vector<int> in_nodes, out_nodes;
    for (int l = 0; l < net.N; ++l) {
        if (net.adjacency(l, k) == 1) {
            in_nodes.push_back(l);
            v.rows_in += model.nodes[l].p();
        } else {
            out_nodes.push_back(l);
            v.rows_out += model.nodes[l].p();
        }
    }
    const int n = model.n();
    v.C_in = Mat::Zero(v.rows_in, n);
    v.C_out = Mat::Zero(v.rows_out, n);
    int row = 0;
    for (int l : in_nodes) {
        v.C_in.middleRows(row, model.nodes[l].p()) = model.nodes[l].C;
        rin.push_back(model.nodes[l].R);
        row += model.nodes[l].p();
    }
    row = 0;
    for (int l : out_nodes) {
        v.C_out.middleRows(row, model.nodes[l].p()) = model.nodes[l].C;
        rout.push_back(model.nodes[l].R);
        row += model.nodes[l].p();
    }
    v.R_in = block_diag(rin);
    v.R_out = block_diag(rout);
    return v;
}

// Predicted-state covariance in measurement-update form:
//   A V A^T - A V C^T (C V C^T + R)^{-1} C V A^T + B B^T.
Mat predicted_covariance(const Mat& A, const Mat& BBt, const Mat& C, const Mat& R,
                         const Mat& V) {
    if (C.rows() == 0) return symmetrized(A * V * A.transpose() + BBt);
    const Mat cross = C * V * A.transpose();
    const Mat innov = symmetrized(C * V * C.transpose() + R);
    return symmetrized(A * V * A.transpose() -
                       cross.transpose() * spd_solve(innov, cross, "innovation covariance") +
                       BBt);
}

}  // namespace

KlComparison kl_comparison(const SensorNetwork& net, const GlobalModel& model, int k,
                           const Vec& xhat_k, const Mat& V_k, Tolerance c, const Mat* Q_loc) {
    if (k < 0 || k >= net.N) throw std::out_of_range("node index out of range");
    const int n = model.n();
    const SplitView view = split_by_neighborhood(net, model, k);

    Mat Q_unobserved = Q_loc ? *Q_loc : Mat::Identity(view.rows_out, view.rows_out);
    if (Q_unobserved.rows() != view.rows_out || Q_unobserved.cols() != view.rows_out) {
        throw std::invalid_argument("unobserved-noise block has the wrong size");
    }

    const Mat BBt = model.BBt();
    const int zdim = n + view.rows_in + view.rows_out;

    // Joint map [x_{t+1}; y_in; y_out] = T x_t + noise, with the local view
    // zeroing the unobserved rows.
    Mat T_full = Mat::Zero(zdim, n);
    T_full.topRows(n) = model.A;
    T_full.middleRows(n, view.rows_in) = view.C_in;
    T_full.bottomRows(view.rows_out) = view.C_out;

    Mat T_local = T_full;
    T_local.bottomRows(view.rows_out).setZero();

    Mat noise_local = Mat::Zero(zdim, zdim);
    noise_local.topLeftCorner(n, n) = BBt;
    noise_local.block(n, n, view.rows_in, view.rows_in) = view.R_in;
    noise_local.bottomRightCorner(view.rows_out, view.rows_out) = Q_unobserved;

    Mat noise_full = noise_local;
    noise_full.bottomRightCorner(view.rows_out, view.rows_out) = view.R_out;

    const Vec mu_local = T_local * xhat_k;
    const Vec mu_full = T_full * xhat_k;

    const Mat K_local = symmetrized(T_local * V_k * T_local.transpose() + noise_local);
    const Mat K_full = symmetrized(T_full * V_k * T_full.transpose() + noise_full);

    // Covariance inflation of the worst-case densities: V - P of the
    // respective one-step predictions, injected on the state block.
    const Mat P_loc_next = predicted_covariance(model.A, BBt, view.C_in, view.R_in, V_k);
    const double theta_loc = solve_theta(P_loc_next, c);
    const Mat V_loc_next = inflate_covariance(P_loc_next, theta_loc);

    Mat C_all(view.rows_in + view.rows_out, n);
    C_all.topRows(view.rows_in) = view.C_in;
    C_all.bottomRows(view.rows_out) = view.C_out;
    Mat R_all = Mat::Zero(view.rows_in + view.rows_out, view.rows_in + view.rows_out);
    R_all.topLeftCorner(view.rows_in, view.rows_in) = view.R_in;
    R_all.bottomRightCorner(view.rows_out, view.rows_out) = view.R_out;

    const Mat P_full_next = predicted_covariance(model.A, BBt, C_all, R_all, V_k);
    const double theta_full = solve_theta(P_full_next, c);
    const Mat V_full_next = inflate_covariance(P_full_next, theta_full);

    Mat K_local_lf = K_local;
    K_local_lf.topLeftCorner(n, n) += V_loc_next - P_loc_next;
    K_local_lf = symmetrized(K_local_lf);

    Mat K_full_lf = K_full;
    K_full_lf.topLeftCorner(n, n) += V_full_next - P_full_next;
    K_full_lf = symmetrized(K_full_lf);

    KlComparison out;
    out.d_local_lf = gaussian_kl(mu_full, K_full_lf, mu_local, K_local_lf);
    out.d_local_nominal = gaussian_kl(mu_full, K_full_lf, mu_local, K_local);
    return out;
}

}  // namespace drkf
