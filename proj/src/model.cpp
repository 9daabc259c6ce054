#include "drkf/model.hpp"

#include <stdexcept>

namespace drkf {

namespace {

void require_invertible_d(const Mat& d, int node_index) {
    if (d.rows() != d.cols()) {
        throw std::invalid_argument("D must be square at node " + std::to_string(node_index));
    }
    Eigen::FullPivLU<Mat> lu(d);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("singular noise shaping matrix D at node " +
                                    std::to_string(node_index));
    }
}

}  // namespace

NodeModel NodeModel::from_cd(const Mat& c, const Mat& d) {
    NodeModel node;
    node.C = c;
    node.D = d;
    node.R = symmetrized(d * d.transpose());
    return node;
}

NodeModel NodeModel::from_cr(const Mat& c, const Mat& r) {
    NodeModel node;
    node.C = c;
    node.D = chol_lower(r, "measurement noise covariance");
    node.R = symmetrized(r);
    return node;
}

GlobalModel build_global_model(const Mat& A, const Mat& B,
                               const std::vector<NodeModel>& nodes) {
    if (A.rows() != A.cols()) throw std::invalid_argument("A must be square");
    const int n = static_cast<int>(A.rows());
    if (B.rows() != n) throw std::invalid_argument("B row count must match the state dimension");
    if (nodes.empty()) throw std::invalid_argument("at least one sensor node is required");

    int total_p = 0;
    for (size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k].n() != n) {
            throw std::invalid_argument("C has wrong column count at node " + std::to_string(k));
        }
        if (nodes[k].D.rows() != nodes[k].p()) {
            throw std::invalid_argument("C/D row mismatch at node " + std::to_string(k));
        }
        require_invertible_d(nodes[k].D, static_cast<int>(k));
        total_p += nodes[k].p();
    }

    GlobalModel g;
    g.A = A;
    g.B = B;
    g.nodes = nodes;
    g.C = Mat::Zero(total_p, n);
    g.D = Mat::Zero(total_p, total_p);
    g.y_offset.resize(nodes.size());
    g.S_tot = Mat::Zero(n, n);
    int row = 0;
    for (size_t k = 0; k < nodes.size(); ++k) {
        const int p = nodes[k].p();
        g.y_offset[k] = row;
        g.C.middleRows(row, p) = nodes[k].C;
        g.D.block(row, row, p, p) = nodes[k].D;
        g.S_tot += nodes[k].C.transpose() *
                   spd_solve(nodes[k].R, nodes[k].C, "R at node " + std::to_string(k));
        row += p;
    }
    g.S_tot = symmetrized(g.S_tot);
    g.R = symmetrized(g.D * g.D.transpose());

    const int m = B.cols();
    g.gamma_B = Mat::Zero(n, m + total_p);
    g.gamma_B.leftCols(m) = B;
    g.gamma_D = Mat::Zero(total_p, m + total_p);
    g.gamma_D.rightCols(total_p) = g.D;
    return g;
}

LocalModel build_local_model(const SensorNetwork& net, const std::vector<NodeModel>& nodes,
                             int k) {
    if (k < 0 || k >= net.N) throw std::out_of_range("node index out of range");
    if (static_cast<int>(nodes.size()) != net.N) {
        throw std::invalid_argument("node model count must match the network size");
    }
    LocalModel local;
    local.k = k;
    local.members = net.neighborhoods[k];

    int rows = 0;
    for (int l : local.members) rows += nodes[l].p();
    const int n = nodes[k].n();

    local.C_loc = Mat::Zero(rows, n);
    local.D_loc = Mat::Zero(rows, rows);
    local.S = Mat::Zero(n, n);
    local.row_offset.resize(local.members.size());
    int row = 0;
    for (size_t i = 0; i < local.members.size(); ++i) {
        const int l = local.members[i];
        const int p = nodes[l].p();
        local.row_offset[i] = row;
        local.C_loc.middleRows(row, p) = nodes[l].C;
        local.D_loc.block(row, row, p, p) = nodes[l].D;
        local.S += nodes[l].C.transpose() *
                   spd_solve(nodes[l].R, nodes[l].C, "R at node " + std::to_string(l));
        row += p;
    }
    local.S = symmetrized(local.S);
    local.R_loc = symmetrized(local.D_loc * local.D_loc.transpose());
    return local;
}

std::vector<LocalModel> build_all_local_models(const SensorNetwork& net,
                                               const std::vector<NodeModel>& nodes) {
    std::vector<LocalModel> out;
    out.reserve(net.N);
    for (int k = 0; k < net.N; ++k) out.push_back(build_local_model(net, nodes, k));
    return out;
}

bool check_reachability(const Mat& A, const Mat& B) {
    if (A.rows() != A.cols()) throw std::invalid_argument("A must be square");
    if (B.rows() != A.rows()) throw std::invalid_argument("A/B dimension mismatch");
    const int n = static_cast<int>(A.rows());
    Mat block(n, n * B.cols());
    Mat power = B;
    for (int i = 0; i < n; ++i) {
        block.middleCols(i * B.cols(), B.cols()) = power;
        power = A * power;
    }
    return numerical_rank(block) == n;
}

bool check_observability(const Mat& A, const Mat& C) {
    if (A.rows() != A.cols()) throw std::invalid_argument("A must be square");
    if (C.cols() != A.rows()) throw std::invalid_argument("A/C dimension mismatch");
    const int n = static_cast<int>(A.rows());
    Mat block(n * C.rows(), n);
    Mat power = C;
    for (int i = 0; i < n; ++i) {
        block.middleRows(i * C.rows(), C.rows()) = power;
        power = power * A;
    }
    return numerical_rank(block) == n;
}

}  // namespace drkf
