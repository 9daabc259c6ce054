#include "drkf/network.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace drkf {

SensorNetwork SensorNetwork::from_adjacency(const Eigen::MatrixXi& j) {
    if (j.rows() != j.cols() || j.rows() == 0) {
        throw std::invalid_argument("adjacency must be a nonempty square matrix");
    }
    const int n = static_cast<int>(j.rows());
    for (int k = 0; k < n; ++k) {
        if (j(k, k) != 1) {
            throw std::invalid_argument("adjacency diagonal must be 1 (node " +
                                        std::to_string(k) + ")");
        }
        for (int l = 0; l < n; ++l) {
            if (j(l, k) != 0 && j(l, k) != 1) {
                throw std::invalid_argument("adjacency entries must be 0 or 1");
            }
            if (j(l, k) != j(k, l)) {
                throw std::invalid_argument("adjacency must be symmetric: entry (" +
                                            std::to_string(l) + "," + std::to_string(k) + ")");
            }
        }
    }
    SensorNetwork net;
    net.N = n;
    net.adjacency = j;
    net.neighborhoods.resize(n);
    net.degrees.resize(n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if (j(l, k) == 1) net.neighborhoods[k].push_back(l);
        }
        net.degrees[k] = static_cast<int>(net.neighborhoods[k].size());
    }
    return net;
}

SensorNetwork SensorNetwork::full(int n_nodes) {
    if (n_nodes < 1) throw std::invalid_argument("network needs at least one node");
    return from_adjacency(Eigen::MatrixXi::Ones(n_nodes, n_nodes));
}

bool SensorNetwork::connected() const {
    std::vector<bool> seen(N, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        const int k = stack.back();
        stack.pop_back();
        for (int l : neighborhoods[k]) {
            if (!seen[l]) {
                seen[l] = true;
                ++count;
                stack.push_back(l);
            }
        }
    }
    return count == N;
}

int SensorNetwork::max_degree() const {
    return *std::max_element(degrees.begin(), degrees.end());
}

DiffusionWeights build_diffusion_weights(const SensorNetwork& net, WeightRule rule,
                                         double eps) {
    const int n = net.N;
    Mat w = Mat::Zero(n, n);
    switch (rule) {
        case WeightRule::Identity:
            w = Mat::Identity(n, n);
            break;
        case WeightRule::Degree:
            for (int k = 0; k < n; ++k) {
                double total = 0.0;
                for (int l : net.neighborhoods[k]) total += net.degrees[l];
                for (int l : net.neighborhoods[k]) w(l, k) = net.degrees[l] / total;
            }
            break;
        case WeightRule::Consensus: {
            const int dmax = net.max_degree();
            const double eps_max = dmax > 1 ? 1.0 / (dmax - 1) : std::numeric_limits<double>::infinity();
            if (!(eps > 0.0) || eps > eps_max) {
                throw std::invalid_argument(
                    "consensus parameter " + std::to_string(eps) +
                    " out of range (0, " + std::to_string(eps_max) + "]");
            }
            for (int k = 0; k < n; ++k) {
                for (int l : net.neighborhoods[k]) {
                    w(l, k) = (l == k) ? 1.0 - eps * (net.degrees[k] - 1) : eps;
                }
            }
            break;
        }
    }
    return DiffusionWeights{w};
}

WeightDiagnostics validate_weights(const Mat& W, const SensorNetwork& net) {
    WeightDiagnostics diag;
    diag.min_entry = W.minCoeff();
    for (int k = 0; k < net.N; ++k) {
        diag.max_column_deviation =
            std::max(diag.max_column_deviation, std::abs(W.col(k).sum() - 1.0));
        for (int l = 0; l < net.N; ++l) {
            if (net.adjacency(l, k) == 0 && W(l, k) != 0.0) {
                diag.support_violations.emplace_back(l, k);
            }
        }
    }
    return diag;
}

}  // namespace drkf
