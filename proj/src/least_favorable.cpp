#include "drkf/least_favorable.hpp"

namespace drkf {

GainSchedule forward_gain_sweep(const GlobalModel& model, Tolerance c, const Mat& V0, int T) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    GainSchedule s;
    s.T = T;
    s.G.resize(T + 1);
    s.theta.resize(T + 1);
    s.V.resize(T + 2);
    s.P.resize(T + 2);
    s.V[0] = symmetrized(V0);
    s.P[0] = s.V[0];

    const Mat BBt = model.BBt();
    for (int t = 0; t <= T; ++t) {
        const Mat innov_cov = symmetrized(model.C * s.V[t] * model.C.transpose() + model.R);
        s.G[t] = spd_solve(innov_cov, model.C * s.V[t] * model.A.transpose(),
                           "innovation covariance at t=" + std::to_string(t))
                     .transpose();
        const CovarianceStep cov = covariance_step(model.A, BBt, model.S_tot, s.V[t], c);
        s.P[t + 1] = cov.P;
        s.theta[t] = cov.theta;
        s.V[t + 1] = cov.V;
    }
    return s;
}

BackwardSweep backward_omega_sweep(const GlobalModel& model, const GainSchedule& schedule) {
    const int T = schedule.T;
    const int n = model.n();
    BackwardSweep out;
    out.omega_inv.resize(T + 2);
    out.K.resize(T + 1);
    out.Gamma_H.resize(T + 1);
    out.omega_inv[T + 1] = Mat::Zero(n, n);

    for (int t = T; t >= 0; --t) {
        const Mat noise_map = model.gamma_B - schedule.G[t] * model.gamma_D;  // n x (pN+n)
        const Mat weight = symmetrized(out.omega_inv[t + 1] +
                                       schedule.theta[t] * Mat::Identity(n, n));
        const Mat closed_loop = model.A - schedule.G[t] * model.C;

        const Mat K_inv = symmetrized(Mat::Identity(noise_map.cols(), noise_map.cols()) -
                                      noise_map.transpose() * weight * noise_map);
        Eigen::LLT<Mat> llt(K_inv);
        if (llt.info() != Eigen::Success) {
            throw BackwardSweepError(
                "K lost positive definiteness at t=" + std::to_string(t) +
                    " (tolerance too large for this horizon)",
                t);
        }
        out.K[t] = symmetrized(llt.solve(Mat::Identity(K_inv.rows(), K_inv.cols())));
        out.Gamma_H[t] = out.K[t] * noise_map.transpose() * weight * closed_loop;
        out.omega_inv[t] = symmetrized(closed_loop.transpose() * weight * closed_loop +
                                       out.Gamma_H[t].transpose() * K_inv * out.Gamma_H[t]);
    }
    return out;
}

Mat factor_K(const Mat& K) { return chol_lower(K, "noise shaping matrix K"); }

LfStage assemble_lf_model(const GlobalModel& model, const GainSchedule& schedule,
                          const BackwardSweep& backward, int t) {
    if (t < 0 || t > schedule.T) throw std::out_of_range("stage index outside the horizon");
    const int n = model.n();
    const int pN = model.total_p();
    const int m = static_cast<int>(model.B.cols());  // process-noise channels

    LfStage stage;
    stage.Gamma_H = backward.Gamma_H[t];
    stage.Gamma_L = factor_K(backward.K[t]);
    stage.M = stage.Gamma_H.topRows(m);
    stage.H = stage.Gamma_H.bottomRows(pN);
    stage.N_top = stage.Gamma_L.topRows(m);
    stage.L = stage.Gamma_L.bottomRows(pN);
    stage.H_node.reserve(model.N());
    stage.L_node.reserve(model.N());
    for (int k = 0; k < model.N(); ++k) {
        stage.H_node.push_back(stage.H.middleRows(model.y_offset[k], model.nodes[k].p()));
        stage.L_node.push_back(stage.L.middleRows(model.y_offset[k], model.nodes[k].p()));
    }

    const Mat& G = schedule.G[t];
    const Mat noise_map = model.gamma_B - G * model.gamma_D;
    stage.A_err = model.A - G * model.C + noise_map * stage.Gamma_H;
    stage.B_err = noise_map * stage.Gamma_L;

    stage.A_lf = Mat::Zero(2 * n, 2 * n);
    stage.A_lf.topLeftCorner(n, n) = model.A;
    stage.A_lf.topRightCorner(n, n) = model.gamma_B * stage.Gamma_H;  // = B M
    stage.A_lf.bottomRightCorner(n, n) = stage.A_err;

    stage.B_lf = Mat::Zero(2 * n, m + pN);
    stage.B_lf.topRows(n) = model.gamma_B * stage.Gamma_L;  // = B N
    stage.B_lf.bottomRows(n) = stage.B_err;

    stage.C_lf = Mat::Zero(pN, 2 * n);
    stage.C_lf.leftCols(n) = model.C;
    stage.C_lf.rightCols(n) = model.gamma_D * stage.Gamma_H;  // = D H

    stage.D_lf = model.gamma_D * stage.Gamma_L;  // = D L
    return stage;
}

std::vector<LfStage> synthesize_lf_model(const GlobalModel& model, const GainSchedule& schedule,
                                         const BackwardSweep& backward) {
    std::vector<LfStage> stages;
    stages.reserve(schedule.T + 1);
    for (int t = 0; t <= schedule.T; ++t) {
        stages.push_back(assemble_lf_model(model, schedule, backward, t));
    }
    return stages;
}

}  // namespace drkf
