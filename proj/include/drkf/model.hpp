#pragma once

#include <vector>

#include "drkf/linalg.hpp"
#include "drkf/network.hpp"

namespace drkf {

/// One sensor's observation model: y_k = C_k x + D_k v_k with v_k unit white
/// noise, so the measurement noise covariance is R_k = D_k D_k^T.
struct NodeModel {
    Mat C;  // p_k x n
    Mat D;  // p_k x p_k, invertible
    Mat R;  // D D^T

    int p() const { return static_cast<int>(C.rows()); }
    int n() const { return static_cast<int>(C.cols()); }

    static NodeModel from_cd(const Mat& c, const Mat& d);
    /// Builds D as the lower Cholesky factor of a given noise covariance.
    static NodeModel from_cr(const Mat& c, const Mat& r);
};

/// The network-wide model with all sensor outputs stacked:
///   x_{t+1} = A x_t + B w_t,  y_t = C x_t + D v_t
/// rewritten with joint unit noise u = [w; v] through gamma_B = [B 0] and
/// gamma_D = [0 D], which keeps process and measurement noise independent
/// (gamma_B gamma_D^T = 0 by construction).
struct GlobalModel {
    Mat A;        // n x n
    Mat B;        // n x n
    Mat C;        // (sum p_k) x n, nodes stacked ascending
    Mat D;        // block diagonal of D_k
    Mat R;        // D D^T
    Mat gamma_B;  // [B 0]
    Mat gamma_D;  // [0 D]
    Mat S_tot;    // C^T R^{-1} C
    std::vector<NodeModel> nodes;
    std::vector<int> y_offset;  // row offset of node k's block in the stacked y

    int n() const { return static_cast<int>(A.rows()); }
    int N() const { return static_cast<int>(nodes.size()); }
    int total_p() const { return static_cast<int>(C.rows()); }
    Mat BBt() const { return B * B.transpose(); }

    /// Measurement rows of node k within the stacked y.
    Eigen::VectorBlock<const Vec> y_block(const Vec& y, int k) const {
        return y.segment(y_offset[k], nodes[k].p());
    }
};

GlobalModel build_global_model(const Mat& A, const Mat& B,
                               const std::vector<NodeModel>& nodes);

/// Node k's view of the model: the outputs of its neighborhood stacked in
/// ascending node order, with S_k = sum_{l in N_k} C_l^T R_l^{-1} C_l.
struct LocalModel {
    int k = 0;
    std::vector<int> members;    // neighborhood, ascending
    Mat C_loc;                   // stacked C_l
    Mat D_loc;                   // block diagonal D_l
    Mat R_loc;                   // D_loc D_loc^T
    Mat S;                       // information matrix of the neighborhood
    std::vector<int> row_offset; // row offset of member i's block in C_loc

    int rows() const { return static_cast<int>(C_loc.rows()); }
};

LocalModel build_local_model(const SensorNetwork& net, const std::vector<NodeModel>& nodes,
                             int k);

std::vector<LocalModel> build_all_local_models(const SensorNetwork& net,
                                               const std::vector<NodeModel>& nodes);

/// Rank test on [B, AB, ..., A^{n-1}B].
bool check_reachability(const Mat& A, const Mat& B);

/// Rank test on [C; CA; ...; CA^{n-1}].
bool check_observability(const Mat& A, const Mat& C);

}  // namespace drkf
