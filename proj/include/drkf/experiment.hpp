#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "drkf/least_favorable.hpp"
#include "drkf/performance.hpp"
#include "drkf/scenario.hpp"
#include "drkf/simulate.hpp"

namespace drkf {

struct WindowSpec {
    double alpha = 0.5;
    double beta = 0.9;
};

struct CustomModelSpec {
    Mat A;
    Mat B;
    std::vector<NodeModel> nodes;
};

/// Fully resolved experiment description. Loaded from a JSON document; every
/// field has a default so a minimal config runs the reference scenario.
struct ScenarioConfig {
    std::string model_type = "projectile";  // "projectile" | "custom"
    int N = 20;
    std::uint64_t network_seed = 1;
    std::optional<Eigen::MatrixXi> adjacency;
    std::optional<std::vector<std::string>> sensor_types;
    std::optional<CustomModelSpec> custom;
    std::optional<Vec> deterministic_input;  // custom models only
    double c = 0.02;
    double consensus_eps = 0.1;
    int horizon = 300;
    WindowSpec window;
    int mc_runs = 0;
    std::uint64_t master_seed = 12345;
    std::string out_dir = "out";
    bool dump_lf = false;  // also write the time-indexed worst-case model
};

ScenarioConfig load_config(const std::string& path);

/// Everything the analysis passes need, independent of where it came from.
struct ScenarioBundle {
    GlobalModel global;
    SensorNetwork network;
    std::vector<LocalModel> locals;
    Vec r;  // zero-size when there is no deterministic input
    Vec xhat0;
    Mat V0;
    std::vector<SensorType> types;            // empty for custom models
    std::vector<std::array<int, 3>> perms;    // empty for custom models
    double radius = 0.0;
};

ScenarioBundle build_scenario(const ScenarioConfig& config);

/// The eight predictors evaluated by every experiment, in output order.
enum class Variant {
    RkfDiffusion,
    KfDiffusion,
    RkfConsensus,
    KfConsensus,
    RkfLocal,
    KfLocal,
    RkfCentral,
    KfCentral,
};

const std::vector<Variant>& all_variants();
std::string variant_label(Variant v);
bool variant_is_robust(Variant v);
bool variant_is_central(Variant v);

struct VariantResult {
    Variant variant;
    std::string label;
    PerformanceTrace trace;
    Vec steady_node;       // window-averaged analytic MSD per node
    double steady_avg = 0.0;
};

/// Exact (Lyapunov) evaluation of every predictor under the worst-case model
/// synthesized for the centralized filter at the configured tolerance.
struct AnalysisResult {
    int T = 0;
    double c = 0.0;  // tolerance the worst-case model was synthesized for
    int window_begin = 0;
    int window_end = 0;
    GainSchedule schedule;
    BackwardSweep backward;
    std::vector<VariantResult> variants;
    Vec theta_central;  // (T+1)
    Mat theta_nodes;    // (T+1) x N; shared by all distributed robust variants
};

AnalysisResult run_analysis(const ScenarioBundle& sc, double c, double consensus_eps, int T,
                            const WindowSpec& window);

/// Monte-Carlo counterpart over worst-case sample paths; the same eight
/// predictors consume identical measurement streams.
struct MonteCarloResult {
    int runs = 0;
    std::vector<ErrorTrace> traces;
    std::vector<SteadyMsd> steady;  // same order as all_variants()
};

MonteCarloResult run_monte_carlo(const ScenarioBundle& sc, const AnalysisResult& analysis,
                                 double consensus_eps, int runs, std::uint64_t master_seed);

struct ExperimentOutputs {
    AnalysisResult analysis;
    std::optional<MonteCarloResult> monte_carlo;
    std::vector<std::string> files_written;
};

/// Full three-pass run plus optional Monte Carlo; writes msd_avg.csv,
/// msd_nodes.csv, theta.csv and manifest.json into config.out_dir.
ExperimentOutputs run_experiment(const ScenarioConfig& config);

/// Dry-run checks (dimensions, observability, weights, window). Returns true
/// when everything passes; findings go to `report`.
bool validate_scenario(const ScenarioConfig& config, std::ostream& report);

}  // namespace drkf
