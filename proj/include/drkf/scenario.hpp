#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "drkf/model.hpp"
#include "drkf/network.hpp"

namespace drkf {

/// Which two position coordinates a sensor measures. Each pattern selects two
/// of {x, y, z}; no single sensor sees all three.
enum class SensorType { XY, XZ, YZ };

const char* sensor_type_name(SensorType t);
SensorType sensor_type_from_name(const std::string& name);

/// 3 x 6 observation matrix [0 diag(pattern)] acting on the state
/// [v_x v_y v_z p_x p_y p_z].
Mat sensor_C(SensorType t);

/// Coordinates ({0,1,2} subset) covered by the union of the given types.
std::array<bool, 3> coordinate_coverage(const std::vector<SensorType>& types);

struct NetworkGenResult {
    SensorNetwork network;
    std::vector<SensorType> types;
    std::vector<std::array<double, 2>> positions;
    double radius = 0.0;
    int attempts = 0;
};

/// Random geometric graph on the unit square. The radius grows from a small
/// value until the graph is connected; sensor types are assigned round-robin
/// and then shuffled. The draw is regenerated (fresh positions and shuffle)
/// until every neighborhood's types cover all three coordinates, which is
/// what local observability of the projectile model needs.
NetworkGenResult generate_network(int N, std::uint64_t seed, int max_retries = 200);

/// Projectile tracking scenario: double-integrator dynamics in three spatial
/// dimensions sampled at 0.1 s, constant-acceleration deterministic input,
/// position-only sensors with per-node permuted noise covariances
/// R_k = sqrt(k) P_k R0 P_k^T, R0 = 0.5 diag(1, 4, 7), k = 1..N.
struct ProjectileScenario {
    GlobalModel global;
    SensorNetwork network;
    std::vector<LocalModel> locals;
    std::vector<SensorType> types;
    std::vector<std::array<int, 3>> perms;  // row order of each node's permutation
    Vec r;      // deterministic input per step (known gravity contribution)
    Vec xhat0;  // zero
    Mat V0;     // identity
    double radius = 0.0;
};

Mat projectile_A();
Mat projectile_B();
Vec projectile_input();

/// Builds the scenario on a generated network.
ProjectileScenario build_projectile_scenario(int N, std::uint64_t seed);

/// Builds the scenario on an explicit network and type assignment; throws if
/// any node's neighborhood is not locally observable, naming the node and the
/// coordinates it covers.
ProjectileScenario build_projectile_scenario(const SensorNetwork& net,
                                             const std::vector<SensorType>& types,
                                             std::uint64_t seed);

}  // namespace drkf
