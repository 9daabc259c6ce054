#pragma once

#include <stdexcept>
#include <vector>

#include "drkf/model.hpp"
#include "drkf/robust_core.hpp"

namespace drkf {

/// Gains and covariances of the centralized risk-sensitive filter over a
/// finite horizon. G[t] and theta[t] are defined for t in [0, T]; V[t] and
/// P[t] for t in [0, T+1], with P[0] set to V[0] by convention (no step has
/// produced a P at time 0).
struct GainSchedule {
    int T = 0;
    std::vector<Mat> G;
    std::vector<double> theta;
    std::vector<Mat> V;
    std::vector<Mat> P;
};

/// Forward sweep of the covariance/gain recursion. Measurement values play no
/// role in the schedule.
GainSchedule forward_gain_sweep(const GlobalModel& model, Tolerance c, const Mat& V0, int T);

/// Thrown when the backward recursion loses positive definiteness of K_t; the
/// offending time index is attached. No regularization is applied: a failure
/// means the tolerance is too large for this horizon.
class BackwardSweepError : public std::runtime_error {
public:
    BackwardSweepError(const std::string& msg, int t) : std::runtime_error(msg), t(t) {}
    int t;
};

/// Output of the terminal-anchored backward recursion. omega_inv[t] is
/// defined for t in [0, T+1] with omega_inv[T+1] = 0; K[t] and Gamma_H[t]
/// for t in [0, T].
struct BackwardSweep {
    std::vector<Mat> omega_inv;
    std::vector<Mat> K;
    std::vector<Mat> Gamma_H;
};

BackwardSweep backward_omega_sweep(const GlobalModel& model, const GainSchedule& schedule);

/// Lower-triangular Cholesky factor of K; any orthogonal right-rotation of
/// the factor would generate the same second-order statistics, the triangular
/// choice makes outputs deterministic.
Mat factor_K(const Mat& K);

/// One time slice of the worst-case model
///   xi_{t+1} = A_lf xi_t + B_lf eps_t,   y_t = C_lf xi_t + D_lf eps_t
/// with xi = [x; e] stacking the true state over the centralized filter
/// error, plus the partitions of Gamma_H = [M; H] and Gamma_L = [N; L] used
/// by the per-node error analysis.
struct LfStage {
    Mat A_lf;  // 2n x 2n
    Mat B_lf;  // 2n x (m + pN)
    Mat C_lf;  // pN x 2n
    Mat D_lf;  // pN x (m + pN)

    Mat Gamma_H;  // (m + pN) x n, m = process-noise channel count (n when B is square)
    Mat Gamma_L;  // (m + pN) x (m + pN)
    Mat M;        // m x n          process-noise rows of Gamma_H
    Mat H;        // pN x n         measurement-noise rows of Gamma_H
    Mat N_top;    // m x (m + pN)   process-noise rows of Gamma_L
    Mat L;        // pN x (m + pN)  measurement-noise rows of Gamma_L
    std::vector<Mat> H_node;  // per-node row slices of H
    std::vector<Mat> L_node;  // per-node row slices of L

    Mat A_err;  // filter-error transition: A - G C + (gamma_B - G gamma_D) Gamma_H
    Mat B_err;  // filter-error noise input: (gamma_B - G gamma_D) Gamma_L
};

LfStage assemble_lf_model(const GlobalModel& model, const GainSchedule& schedule,
                          const BackwardSweep& backward, int t);

/// All stages t = 0..T.
std::vector<LfStage> synthesize_lf_model(const GlobalModel& model, const GainSchedule& schedule,
                                         const BackwardSweep& backward);

}  // namespace drkf
