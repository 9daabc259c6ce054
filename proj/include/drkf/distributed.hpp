#pragma once

#include <vector>

#include "drkf/model.hpp"
#include "drkf/network.hpp"
#include "drkf/robust_core.hpp"

namespace drkf {

/// Per-node filter state of the distributed algorithm. psi holds the
/// intermediate (pre-diffusion) predictions of the last round.
struct NetworkFilterState {
    std::vector<Vec> xhat;
    std::vector<Mat> V;
    std::vector<double> theta;
    std::vector<Mat> P;
    std::vector<Vec> psi;

    int size() const { return static_cast<int>(xhat.size()); }
};

NetworkFilterState make_network_state(int N, const Vec& xhat0, const Mat& V0);

struct IncrementalResult {
    Vec psi;
    Mat P;
    double theta = 0.0;
    Mat V;
};

/// Incremental step at one node: absorb the neighborhood measurements into
/// the prediction, then run the covariance/risk update against tolerance c.
/// y_loc is stacked in the same ascending-neighbor order as the local model.
IncrementalResult incremental_step(const GlobalModel& model, const LocalModel& local,
                                   const Vec& xhat, const Mat& V, const Vec& y_loc,
                                   Tolerance c);

/// Diffusion step: each node's new prediction is the convex combination of
/// the neighborhood's intermediate predictions, with column k of W holding
/// node k's weights.
std::vector<Vec> diffuse(const DiffusionWeights& weights, const std::vector<Vec>& psi);

/// Slices the network-wide stacked measurement into the neighborhood stack
/// expected by incremental_step.
Vec stack_local_measurements(const GlobalModel& model, const LocalModel& local, const Vec& y);

/// One synchronous round: incremental steps at every node, then diffusion.
/// The optional deterministic input r is added to every intermediate
/// prediction before the combination.
void dkf_step(NetworkFilterState& state, const GlobalModel& model,
              const std::vector<LocalModel>& locals, const DiffusionWeights& weights,
              const Vec& y, Tolerance c, const Vec* r = nullptr);

}  // namespace drkf
