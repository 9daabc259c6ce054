#include "drkf/distributed.hpp"

#include <stdexcept>

namespace drkf {

NetworkFilterState make_network_state(int N, const Vec& xhat0, const Mat& V0) {
    NetworkFilterState s;
    s.xhat.assign(N, xhat0);
    s.V.assign(N, symmetrized(V0));
    s.theta.assign(N, 0.0);
    s.P.assign(N, symmetrized(V0));
    s.psi.assign(N, xhat0);
    return s;
}

IncrementalResult incremental_step(const GlobalModel& model, const LocalModel& local,
                                   const Vec& xhat, const Mat& V, const Vec& y_loc,
                                   Tolerance c) {
    if (y_loc.size() != local.rows()) {
        throw std::invalid_argument("neighborhood measurement dimension mismatch at node " +
                                    std::to_string(local.k));
    }
    const Mat& A = model.A;

    // Information-weighted innovation sum over the neighborhood:
    // sum_l C_l^T R_l^{-1} (y_l - C_l xhat).
    Vec weighted = Vec::Zero(model.n());
    for (size_t i = 0; i < local.members.size(); ++i) {
        const NodeModel& node = model.nodes[local.members[i]];
        const Vec innovation = y_loc.segment(local.row_offset[i], node.p()) - node.C * xhat;
        weighted += node.C.transpose() *
                    spd_solve(node.R, innovation, "R at node " + std::to_string(local.members[i]));
    }

    const Mat Vinv = spd_inverse(V, "node covariance V");
    const Mat inner = spd_inverse(symmetrized(Vinv + local.S), "node information matrix");

    IncrementalResult out;
    out.psi = A * xhat + A * inner * weighted;
    const CovarianceStep cov = covariance_step(A, model.BBt(), local.S, V, c);
    out.P = cov.P;
    out.theta = cov.theta;
    out.V = cov.V;
    return out;
}

std::vector<Vec> diffuse(const DiffusionWeights& weights, const std::vector<Vec>& psi) {
    const int N = static_cast<int>(psi.size());
    if (weights.W.rows() != N || weights.W.cols() != N) {
        throw std::invalid_argument("weight matrix size does not match the node count");
    }
    std::vector<Vec> combined(N);
    for (int k = 0; k < N; ++k) {
        Vec acc = Vec::Zero(psi[0].size());
        for (int l = 0; l < N; ++l) {
            if (weights.W(l, k) != 0.0) acc += weights.W(l, k) * psi[l];
        }
        combined[k] = std::move(acc);
    }
    return combined;
}

Vec stack_local_measurements(const GlobalModel& model, const LocalModel& local, const Vec& y) {
    Vec y_loc(local.rows());
    for (size_t i = 0; i < local.members.size(); ++i) {
        const int l = local.members[i];
        y_loc.segment(local.row_offset[i], model.nodes[l].p()) = model.y_block(y, l);
    }
    return y_loc;
}

void dkf_step(NetworkFilterState& state, const GlobalModel& model,
              const std::vector<LocalModel>& locals, const DiffusionWeights& weights,
              const Vec& y, Tolerance c, const Vec* r) {
    const int N = state.size();
    if (static_cast<int>(locals.size()) != N) {
        throw std::invalid_argument("local model count does not match the filter state");
    }
    if (y.size() != model.total_p()) {
        throw std::invalid_argument("stacked measurement dimension mismatch");
    }

    // Incremental phase at every node; the diffusion below is a barrier over
    // all intermediate predictions, so no node may read another's update yet.
    for (int k = 0; k < N; ++k) {
        try {
            const Vec y_loc = stack_local_measurements(model, locals[k], y);
            IncrementalResult res =
                incremental_step(model, locals[k], state.xhat[k], state.V[k], y_loc, c);
            if (r) res.psi += *r;
            state.psi[k] = std::move(res.psi);
            state.P[k] = std::move(res.P);
            state.theta[k] = res.theta;
            state.V[k] = std::move(res.V);
        } catch (const std::exception& e) {
            throw std::runtime_error("incremental step failed at node " + std::to_string(k) +
                                     ": " + e.what());
        }
    }

    state.xhat = diffuse(weights, state.psi);
}

}  // namespace drkf
