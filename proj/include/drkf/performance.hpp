#pragma once

#include <vector>

#include "drkf/distributed.hpp"
#include "drkf/least_favorable.hpp"
#include "drkf/model.hpp"
#include "drkf/network.hpp"

namespace drkf {

/// Joint dynamics of the stacked per-node prediction errors and the
/// centralized filter error under the worst-case model:
///   eta_{t+1} = F eta_t + G eps_t,  eta = [x~_1; ...; x~_N; e].
/// F is block upper-triangular; the lower-left block is identically zero.
struct ErrorDynamics {
    Mat F;  // (Nn + n) x (Nn + n)
    Mat G;  // (Nn + n) x (m + pN)
};

/// Assembles F_t and G_t from the network, the combination weights, each
/// node's current covariance V_{k,t}, and the worst-case model slice at t.
ErrorDynamics assemble_error_dynamics(const SensorNetwork& net, const GlobalModel& model,
                                      const std::vector<LocalModel>& locals,
                                      const DiffusionWeights& weights,
                                      const std::vector<Mat>& V_node, const LfStage& stage);

/// Joint second moment at t = 0. All nodes start from the shared prediction
/// xhat_0, so eta_0 stacks N + 1 copies of the same initial error e_0 with
/// covariance V0, giving the rank-deficient Gram structure
///   Q_0 = [[ones ones^T (x) V0, ones (x) V0], [ones^T (x) V0, V0]].
Mat init_Q0(const Mat& V0, int N);

struct PerformanceTrace {
    Mat msd_node;                  // (T+1) x N, trace of each node's error covariance
    Vec msd_avg;                   // (T+1), network average
    std::vector<Mat> var_node;     // per node: n x (T+1), error variance per component
    std::vector<double> q_change;  // Frobenius change of Q per step (length T)
    Mat Q_final;

    int horizon() const { return static_cast<int>(msd_avg.size()) - 1; }
};

/// Propagates Q_{t+1} = F_t Q_t F_t^T + G_t G_t^T, extracting per-node and
/// average mean square deviation at every step. stages[t] must cover
/// t = 0..T-1 for a trace over t = 0..T.
PerformanceTrace lyapunov_sweep(const std::vector<ErrorDynamics>& stages, const Mat& Q0,
                                int n, int N);

/// KL divergence between Gaussians N(mu1, K1) and N(mu2, K2).
double gaussian_kl(const Vec& mu1, const Mat& K1, const Vec& mu2, const Mat& K2);

/// One-step comparison at node k of how well the local worst-case and local
/// nominal predictive densities explain data from the network-wide worst-case
/// density, all conditioned on the same N(xhat_k, V_k) state belief.
/// Measurements are reordered with the neighborhood first; Q_loc is the noise
/// covariance attached to the unobserved rows in the local view (identity
/// when empty).
struct KlComparison {
    double d_local_lf = 0.0;       // D_KL(worst-case || local worst-case)
    double d_local_nominal = 0.0;  // D_KL(worst-case || local nominal)
};

KlComparison kl_comparison(const SensorNetwork& net, const GlobalModel& model, int k,
                           const Vec& xhat_k, const Mat& V_k, Tolerance c,
                           const Mat* Q_loc = nullptr);

}  // namespace drkf
