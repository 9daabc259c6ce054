#pragma once

#include <vector>

#include <Eigen/Dense>

#include "drkf/linalg.hpp"

namespace drkf {

/// Undirected communication graph of a sensor network. Every node is
/// connected to itself; neighborhoods are stored with ascending node index.
struct SensorNetwork {
    int N = 0;
    Eigen::MatrixXi adjacency;                   // 0/1, symmetric, unit diagonal
    std::vector<std::vector<int>> neighborhoods; // sorted ascending, includes k
    std::vector<int> degrees;                    // |neighborhood(k)|

    static SensorNetwork from_adjacency(const Eigen::MatrixXi& j);
    static SensorNetwork full(int n_nodes);
    static SensorNetwork single() { return full(1); }

    bool connected() const;
    int max_degree() const;
};

struct DiffusionWeights {
    Mat W;  // N x N, column-stochastic, supported on the adjacency
};

enum class WeightRule { Identity, Degree, Consensus };

/// Builds the combination matrix for the diffusion step.
///   Identity:  W = I (purely local estimates)
///   Degree:    w_lk proportional to the neighbor's degree, columns normalized
///   Consensus: off-diagonal eps on the neighborhood, 1 - eps*(n_k - 1) on the
///              diagonal; requires eps in (0, 1/(max_k n_k - 1)]
DiffusionWeights build_diffusion_weights(const SensorNetwork& net, WeightRule rule,
                                         double eps = 0.0);

struct WeightDiagnostics {
    double max_column_deviation = 0.0;  // max_k |sum_l w_lk - 1|
    double min_entry = 0.0;
    std::vector<std::pair<int, int>> support_violations;  // (l, k) with w_lk != 0 off-support

    bool pass(double tol = 1e-12) const {
        return max_column_deviation <= tol && min_entry >= -tol && support_violations.empty();
    }
};

WeightDiagnostics validate_weights(const Mat& W, const SensorNetwork& net);

}  // namespace drkf
