#include "drkf/scenario.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "drkf/simulate.hpp"

namespace drkf {

namespace {

constexpr double kSamplingTime = 0.1;
constexpr double kGravity = -10.0;

// Stream salts for the independent scenario draws.
constexpr std::uint64_t kPositionsStream = 0x706f73;  // positions + type shuffle
constexpr std::uint64_t kPermStream = 0x7065726d;     // per-node noise permutations

Mat projectile_phi() {
    Mat phi = Mat::Zero(6, 6);
    phi.block(3, 0, 3, 3) = Mat::Identity(3, 3);
    return phi;
}

std::array<bool, 3> type_coverage(SensorType t) {
    switch (t) {
        case SensorType::XY: return {true, true, false};
        case SensorType::XZ: return {true, false, true};
        case SensorType::YZ: return {false, true, true};
    }
    return {false, false, false};
}

std::string coverage_string(const std::array<bool, 3>& cov) {
    std::string s;
    const char* names[3] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i) {
        if (cov[i]) {
            if (!s.empty()) s += ",";
            s += names[i];
        }
    }
    return s.empty() ? "none" : s;
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(v[i - 1], v[pick(rng)]);
    }
}

}  // namespace

const char* sensor_type_name(SensorType t) {
    switch (t) {
        case SensorType::XY: return "XY";
        case SensorType::XZ: return "XZ";
        case SensorType::YZ: return "YZ";
    }
    return "?";
}

SensorType sensor_type_from_name(const std::string& name) {
    if (name == "XY") return SensorType::XY;
    if (name == "XZ") return SensorType::XZ;
    if (name == "YZ") return SensorType::YZ;
    throw std::invalid_argument("unknown sensor type: " + name);
}

Mat sensor_C(SensorType t) {
    Mat c = Mat::Zero(3, 6);
    const std::array<bool, 3> cov = type_coverage(t);
    for (int i = 0; i < 3; ++i) {
        if (cov[i]) c(i, 3 + i) = 1.0;
    }
    return c;
}

std::array<bool, 3> coordinate_coverage(const std::vector<SensorType>& types) {
    std::array<bool, 3> cov{false, false, false};
    for (SensorType t : types) {
        const std::array<bool, 3> c = type_coverage(t);
        for (int i = 0; i < 3; ++i) cov[i] = cov[i] || c[i];
    }
    return cov;
}

Mat projectile_A() { return Mat::Identity(6, 6) + kSamplingTime * projectile_phi(); }

Mat projectile_B() { return std::sqrt(0.001) * Mat::Identity(6, 6); }

Vec projectile_input() {
    Vec uc = Vec::Zero(6);
    uc(2) = -kGravity;
    const Mat phi = projectile_phi();
    return (kSamplingTime * Mat::Identity(6, 6) +
            0.5 * kSamplingTime * kSamplingTime * phi) *
           uc;
}

NetworkGenResult generate_network(int N, std::uint64_t seed, int max_retries) {
    if (N < 1) throw std::invalid_argument("network needs at least one node");
    std::mt19937_64 rng = make_stream(seed, kPositionsStream);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::string last_failure;
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        std::vector<std::array<double, 2>> pos(N);
        for (auto& p : pos) p = {unit(rng), unit(rng)};

        // Grow the radius until connected; keeping it minimal keeps degrees
        // near the connectivity threshold.
        double radius = 0.1;
        SensorNetwork net;
        while (true) {
            Eigen::MatrixXi adj = Eigen::MatrixXi::Identity(N, N);
            for (int k = 0; k < N; ++k) {
                for (int l = k + 1; l < N; ++l) {
                    const double dx = pos[k][0] - pos[l][0];
                    const double dy = pos[k][1] - pos[l][1];
                    if (std::sqrt(dx * dx + dy * dy) <= radius) {
                        adj(k, l) = adj(l, k) = 1;
                    }
                }
            }
            net = SensorNetwork::from_adjacency(adj);
            if (net.connected() || radius > std::sqrt(2.0)) break;
            radius *= 1.1;
        }

        std::vector<SensorType> types(N);
        for (int k = 0; k < N; ++k) {
            types[k] = static_cast<SensorType>(k % 3);
        }
        seeded_shuffle(types, rng);

        bool covered = true;
        for (int k = 0; k < N && covered; ++k) {
            std::vector<SensorType> neigh_types;
            for (int l : net.neighborhoods[k]) neigh_types.push_back(types[l]);
            const std::array<bool, 3> cov = coordinate_coverage(neigh_types);
            if (!(cov[0] && cov[1] && cov[2])) {
                covered = false;
                last_failure = "node " + std::to_string(k) + " covers only {" +
                               coverage_string(cov) + "}";
            }
        }
        if (covered) {
            NetworkGenResult out;
            out.network = std::move(net);
            out.types = std::move(types);
            out.positions = std::move(pos);
            out.radius = radius;
            out.attempts = attempt;
            return out;
        }
    }
    throw std::runtime_error("could not generate a network where every neighborhood covers "
                             "all three coordinates after " +
                             std::to_string(max_retries) + " attempts (last: " + last_failure +
                             "); increase N or the connection radius");
}

ProjectileScenario build_projectile_scenario(const SensorNetwork& net,
                                             const std::vector<SensorType>& types,
                                             std::uint64_t seed) {
    if (static_cast<int>(types.size()) != net.N) {
        throw std::invalid_argument("one sensor type per node is required");
    }
    const Mat A = projectile_A();
    const Mat B = projectile_B();

    Vec r0_diag(3);
    r0_diag << 0.5, 2.0, 3.5;  // 0.5 * diag(1, 4, 7)
    const Mat R0_chol = r0_diag.cwiseSqrt().asDiagonal();

    std::mt19937_64 perm_rng = make_stream(seed, kPermStream);
    ProjectileScenario sc;
    sc.network = net;
    sc.types = types;
    sc.perms.resize(net.N);

    std::vector<NodeModel> nodes;
    nodes.reserve(net.N);
    for (int k = 0; k < net.N; ++k) {
        std::vector<int> order{0, 1, 2};
        seeded_shuffle(order, perm_rng);
        sc.perms[k] = {order[0], order[1], order[2]};

        Mat P = Mat::Zero(3, 3);
        for (int i = 0; i < 3; ++i) P(i, order[i]) = 1.0;

        // D_k = k^{1/4} P chol(R0) gives R_k = D_k D_k^T = sqrt(k) P R0 P^T,
        // with node indices counted from 1.
        const double scale = std::pow(static_cast<double>(k + 1), 0.25);
        nodes.push_back(NodeModel::from_cd(sensor_C(types[k]), scale * P * R0_chol));
    }

    sc.global = build_global_model(A, B, nodes);
    sc.locals = build_all_local_models(net, nodes);

    for (int k = 0; k < net.N; ++k) {
        if (!check_observability(A, sc.locals[k].C_loc)) {
            std::vector<SensorType> neigh_types;
            for (int l : net.neighborhoods[k]) neigh_types.push_back(types[l]);
            throw std::runtime_error(
                "neighborhood of node " + std::to_string(k) +
                " is not locally observable; it covers only {" +
                coverage_string(coordinate_coverage(neigh_types)) + "}");
        }
    }

    sc.r = projectile_input();
    sc.xhat0 = Vec::Zero(6);
    sc.V0 = Mat::Identity(6, 6);
    return sc;
}

ProjectileScenario build_projectile_scenario(int N, std::uint64_t seed) {
    const NetworkGenResult gen = generate_network(N, seed);
    ProjectileScenario sc = build_projectile_scenario(gen.network, gen.types, seed);
    sc.radius = gen.radius;
    return sc;
}

}  // namespace drkf
