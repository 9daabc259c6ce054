#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "drkf/distributed.hpp"
#include "drkf/least_favorable.hpp"
#include "drkf/model.hpp"

namespace drkf {

/// Independent RNG stream for one trajectory. Streams are derived from the
/// master seed by seeding std::seed_seq with {master, index}, so runs can be
/// generated in any order (or in parallel) and still reproduce bit-for-bit.
std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index);

Vec standard_normal(int dim, std::mt19937_64& rng);

/// One sampled path. x and y always cover t = 0..T; xi is filled only when
/// the path came from the worst-case model (xi = [x; e]).
struct Trajectory {
    std::vector<Vec> x;
    std::vector<Vec> y;
    std::vector<Vec> xi;
};

/// Samples from the nominal model: x_0 ~ N(xhat0, V0), unit white joint
/// noise, optional deterministic input r added to the state update.
Trajectory simulate_nominal(const GlobalModel& model, const Vec& xhat0, const Mat& V0, int T,
                            std::mt19937_64& rng, const Vec* r = nullptr);

/// Samples from the worst-case model stages (must cover t = 0..T-1 at
/// least). xi_0 = [x_0; x_0 - xhat0].
Trajectory simulate_lf(const std::vector<LfStage>& stages, const Vec& xhat0, const Mat& V0,
                       int T, std::mt19937_64& rng, const Vec* r = nullptr);

/// One predictor to run over the measurement streams. Centralized variants
/// ignore the weights and consume the full stacked measurement.
struct FilterConfig {
    std::string label;
    bool centralized = false;
    DiffusionWeights weights;
    double c = 0.0;
};

/// Accumulated error statistics for one predictor across M paired runs.
struct ErrorTrace {
    std::string label;
    int runs = 0;
    Mat msd_node;                // (T+1) x N, mean squared error norm per node
    std::vector<Mat> mean_err;   // per node: n x (T+1), mean error vector

    int horizon() const { return static_cast<int>(msd_node.rows()) - 1; }
    int nodes() const { return static_cast<int>(msd_node.cols()); }
};

/// Runs every predictor on every trajectory. All predictors consume the same
/// measurement realizations, which pairs the comparison and removes the
/// common sampling noise from performance differences.
std::vector<ErrorTrace> run_filter_bank(const GlobalModel& model, const SensorNetwork& net,
                                        const std::vector<LocalModel>& locals,
                                        const std::vector<Trajectory>& trajectories,
                                        const std::vector<FilterConfig>& configs,
                                        const Vec& xhat0, const Mat& V0,
                                        const Vec* r = nullptr);

struct SteadyMsd {
    Vec per_node;
    double average = 0.0;
};

/// Time-average of the run-averaged MSD over the window [t_begin, t_end].
SteadyMsd empirical_msd(const ErrorTrace& trace, int t_begin, int t_end);

}  // namespace drkf
