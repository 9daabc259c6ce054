#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "drkf/scenario.hpp"

using namespace drkf;

TEST_CASE("projectile dynamics matrices") {
    const Mat A = projectile_A();
    REQUIRE(A.rows() == 6);
    for (int i = 0; i < 6; ++i) CHECK(A(i, i) == 1.0);
    // position integrates velocity with the 0.1 s sampling time
    CHECK(A(3, 0) == doctest::Approx(0.1));
    CHECK(A(4, 1) == doctest::Approx(0.1));
    CHECK(A(5, 2) == doctest::Approx(0.1));
    CHECK(A(0, 3) == 0.0);

    const Mat B = projectile_B();
    CHECK(B(0, 0) == doctest::Approx(std::sqrt(0.001)));

    // constant vertical acceleration, integrated over one sample
    const Vec r = projectile_input();
    CHECK(r(2) == doctest::Approx(1.0));     // 0.1 * 10
    CHECK(r(5) == doctest::Approx(0.05));    // 0.5 * 0.1^2 * 10
    CHECK(r(0) == 0.0);
    CHECK(r(3) == 0.0);
}

TEST_CASE("sensor observation patterns") {
    const Mat xy = sensor_C(SensorType::XY);
    REQUIRE(xy.rows() == 3);
    REQUIRE(xy.cols() == 6);
    CHECK(xy(0, 3) == 1.0);
    CHECK(xy(1, 4) == 1.0);
    CHECK(xy.row(2).isZero(0.0));
    CHECK(xy.leftCols(3).isZero(0.0));
    // every pattern has exactly two unit entries
    for (SensorType t : {SensorType::XY, SensorType::XZ, SensorType::YZ}) {
        CHECK(sensor_C(t).sum() == doctest::Approx(2.0));
    }
    CHECK(sensor_type_from_name("YZ") == SensorType::YZ);
    CHECK_THROWS_AS(sensor_type_from_name("ZZ"), std::invalid_argument);
}

TEST_CASE("first node's noise covariance with the identity permutation") {
    Eigen::MatrixXi j(2, 2);
    j << 1, 1, 1, 1;
    const SensorNetwork net = SensorNetwork::from_adjacency(j);
    const std::vector<SensorType> types{SensorType::XY, SensorType::XZ};
    const ProjectileScenario sc = build_projectile_scenario(net, types, 4);

    // R_1 = sqrt(1) * P * 0.5 diag(1,4,7) * P^T: a permutation of the base
    // diagonal, whatever P was drawn
    const Mat R1 = sc.global.nodes[0].R;
    std::multiset<double> diag{R1(0, 0), R1(1, 1), R1(2, 2)};
    const std::multiset<double> expected{0.5, 2.0, 3.5};
    auto it = expected.begin();
    for (double v : diag) CHECK(v == doctest::Approx(*it++));
    CHECK((R1 - R1.transpose()).norm() == 0.0);

    // node 2 scales by sqrt(2)
    const Mat R2 = sc.global.nodes[1].R;
    CHECK(R2.trace() == doctest::Approx(std::sqrt(2.0) * 6.0));
}

TEST_CASE("generated network is connected, covered, and reproducible") {
    const NetworkGenResult a = generate_network(20, 123);
    const NetworkGenResult b = generate_network(20, 123);
    CHECK(a.network.adjacency == b.network.adjacency);
    CHECK(a.types == b.types);
    CHECK(a.network.connected());
    for (int k = 0; k < 20; ++k) {
        std::vector<SensorType> neigh;
        for (int l : a.network.neighborhoods[k]) neigh.push_back(a.types[l]);
        const auto cov = coordinate_coverage(neigh);
        CHECK(cov[0]);
        CHECK(cov[1]);
        CHECK(cov[2]);
    }
    const NetworkGenResult other = generate_network(20, 124);
    CHECK(a.network.adjacency != other.network.adjacency);
}

TEST_CASE("a single sensor can never cover three coordinates") {
    CHECK_THROWS_WITH_AS(generate_network(1, 5, 10), doctest::Contains("covers only"),
                         std::runtime_error);
}

TEST_CASE("two complementary sensors on a full graph are accepted") {
    const SensorNetwork net = SensorNetwork::full(2);
    const std::vector<SensorType> types{SensorType::XY, SensorType::XZ};
    const ProjectileScenario sc = build_projectile_scenario(net, types, 1);
    CHECK(sc.global.N() == 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(check_observability(sc.global.A, sc.locals[k].C_loc));
    }
}

TEST_CASE("uncovered neighborhood is reported with the node and its coverage") {
    // two isolated nodes: each sees only its own two coordinates
    const Eigen::MatrixXi j = Eigen::MatrixXi::Identity(2, 2);
    const SensorNetwork net = SensorNetwork::from_adjacency(j);
    const std::vector<SensorType> types{SensorType::XY, SensorType::XZ};
    CHECK_THROWS_WITH_AS(build_projectile_scenario(net, types, 1),
                         doctest::Contains("node 0"), std::runtime_error);
    try {
        build_projectile_scenario(net, types, 1);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("x,y") != std::string::npos);
    }
}

TEST_CASE("reference scenario has the documented shape") {
    const ProjectileScenario sc = build_projectile_scenario(20, 42);
    CHECK(sc.global.n() == 6);
    CHECK(sc.global.total_p() == 60);
    CHECK(sc.network.N == 20);
    CHECK(check_reachability(sc.global.A, sc.global.B));
    CHECK(check_observability(sc.global.A, sc.global.C));
    CHECK(sc.V0.isIdentity(0.0));
    CHECK(sc.xhat0.isZero(0.0));
    REQUIRE(sc.perms.size() == 20);
    // permutations really are permutations
    for (const auto& p : sc.perms) {
        const std::set<int> s{p[0], p[1], p[2]};
        CHECK(s == std::set<int>{0, 1, 2});
    }
}
