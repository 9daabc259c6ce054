#include "drkf/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace drkf {

namespace {

using nlohmann::json;

Mat parse_matrix(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument(what + " must be a 2-d array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols) {
            throw std::invalid_argument(what + " has ragged rows");
        }
        for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

Vec parse_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + " must be an array");
    Vec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CentralView {
    SensorNetwork network;
    GlobalModel global;
    std::vector<LocalModel> locals;
    DiffusionWeights weights;
};

// The centralized predictors run through the same error-dynamics machinery as
// a one-node network whose single sensor stacks every measurement.
CentralView centralize(const ScenarioBundle& sc) {
    CentralView view;
    view.network = SensorNetwork::single();
    std::vector<NodeModel> nodes{NodeModel::from_cd(sc.global.C, sc.global.D)};
    view.global = build_global_model(sc.global.A, sc.global.B, nodes);
    view.locals = build_all_local_models(view.network, nodes);
    view.weights = build_diffusion_weights(view.network, WeightRule::Identity);
    return view;
}

Vec steady_node_average(const PerformanceTrace& trace, int w0, int w1) {
    const int N = static_cast<int>(trace.msd_node.cols());
    Vec out = Vec::Zero(N);
    for (int k = 0; k < N; ++k) {
        KahanSum s;
        for (int t = w0; t <= w1; ++t) s.add(trace.msd_node(t, k));
        out(k) = s.value() / (w1 - w0 + 1);
    }
    return out;
}

VariantResult analyze_variant(Variant v, const SensorNetwork& net, const GlobalModel& model,
                              const std::vector<LocalModel>& locals,
                              const DiffusionWeights& weights, double filter_c,
                              const std::vector<LfStage>& stages, const Mat& V0, int T,
                              int w0, int w1) {
    const Tolerance cf(filter_c);
    const Mat BBt = model.BBt();
    std::vector<Mat> V(net.N, symmetrized(V0));

    std::vector<ErrorDynamics> dynamics;
    dynamics.reserve(T);
    for (int t = 0; t < T; ++t) {
        dynamics.push_back(assemble_error_dynamics(net, model, locals, weights, V, stages[t]));
        for (int k = 0; k < net.N; ++k) {
            V[k] = covariance_step(model.A, BBt, locals[k].S, V[k], cf).V;
        }
    }

    VariantResult res;
    res.variant = v;
    res.label = variant_label(v);
    res.trace = lyapunov_sweep(dynamics, init_Q0(V0, net.N), model.n(), net.N);
    res.steady_node = steady_node_average(res.trace, w0, w1);
    res.steady_avg = res.steady_node.mean();
    return res;
}

}  // namespace

const std::vector<Variant>& all_variants() {
    static const std::vector<Variant> order{
        Variant::RkfDiffusion, Variant::KfDiffusion, Variant::RkfConsensus,
        Variant::KfConsensus,  Variant::RkfLocal,    Variant::KfLocal,
        Variant::RkfCentral,   Variant::KfCentral,
    };
    return order;
}

std::string variant_label(Variant v) {
    switch (v) {
        case Variant::RkfDiffusion: return "rkf_diff";
        case Variant::KfDiffusion: return "kf_diff";
        case Variant::RkfConsensus: return "rkf_cons";
        case Variant::KfConsensus: return "kf_cons";
        case Variant::RkfLocal: return "rkf_local";
        case Variant::KfLocal: return "kf_local";
        case Variant::RkfCentral: return "rkf_central";
        case Variant::KfCentral: return "kf_central";
    }
    return "?";
}

bool variant_is_robust(Variant v) {
    switch (v) {
        case Variant::RkfDiffusion:
        case Variant::RkfConsensus:
        case Variant::RkfLocal:
        case Variant::RkfCentral: return true;
        default: return false;
    }
}

bool variant_is_central(Variant v) {
    return v == Variant::RkfCentral || v == Variant::KfCentral;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json doc = json::parse(in);

    ScenarioConfig cfg;
    if (doc.contains("model")) {
        const json& m = doc["model"];
        cfg.model_type = m.value("type", std::string("projectile"));
        if (cfg.model_type == "custom") {
            CustomModelSpec spec;
            spec.A = parse_matrix(m.at("A"), "model.A");
            spec.B = parse_matrix(m.at("B"), "model.B");
            for (const json& nj : m.at("nodes")) {
                const Mat C = parse_matrix(nj.at("C"), "node C");
                if (nj.contains("D")) {
                    spec.nodes.push_back(NodeModel::from_cd(C, parse_matrix(nj["D"], "node D")));
                } else {
                    spec.nodes.push_back(NodeModel::from_cr(C, parse_matrix(nj.at("R"), "node R")));
                }
            }
            cfg.custom = std::move(spec);
            if (m.contains("r")) cfg.deterministic_input = parse_vector(m["r"], "model.r");
        } else if (cfg.model_type != "projectile") {
            throw std::invalid_argument("model.type must be 'projectile' or 'custom'");
        }
    }
    if (doc.contains("network")) {
        const json& nw = doc["network"];
        if (nw.contains("adjacency")) {
            const Mat a = parse_matrix(nw["adjacency"], "network.adjacency");
            cfg.adjacency = a.cast<int>();
            cfg.N = static_cast<int>(a.rows());
        }
        if (nw.contains("N")) cfg.N = nw["N"].get<int>();
        if (nw.contains("seed")) cfg.network_seed = nw["seed"].get<std::uint64_t>();
        if (nw.contains("types")) {
            cfg.sensor_types = nw["types"].get<std::vector<std::string>>();
        }
    }
    cfg.c = doc.value("tolerance", cfg.c);
    cfg.consensus_eps = doc.value("consensus_epsilon", cfg.consensus_eps);
    cfg.horizon = doc.value("horizon", cfg.horizon);
    if (doc.contains("window")) {
        cfg.window.alpha = doc["window"].value("alpha", cfg.window.alpha);
        cfg.window.beta = doc["window"].value("beta", cfg.window.beta);
    }
    cfg.mc_runs = doc.value("mc_runs", cfg.mc_runs);
    cfg.master_seed = doc.value("seed", cfg.master_seed);
    cfg.out_dir = doc.value("out_dir", cfg.out_dir);
    cfg.dump_lf = doc.value("dump_lf", cfg.dump_lf);
    return cfg;
}

ScenarioBundle build_scenario(const ScenarioConfig& config) {
    if (!(config.window.alpha > 0.0 && config.window.alpha < config.window.beta &&
          config.window.beta < 1.0)) {
        throw std::invalid_argument("steady-state window needs 0 < alpha < beta < 1");
    }
    if (config.c < 0.0) throw std::invalid_argument("tolerance must be nonnegative");
    if (config.N < 1) throw std::invalid_argument("node count must be positive");

    ScenarioBundle sc;
    if (config.model_type == "projectile") {
        ProjectileScenario proj;
        if (config.adjacency) {
            if (!config.sensor_types) {
                throw std::invalid_argument(
                    "explicit adjacency needs explicit sensor types for the projectile model");
            }
            std::vector<SensorType> types;
            for (const std::string& s : *config.sensor_types) {
                types.push_back(sensor_type_from_name(s));
            }
            proj = build_projectile_scenario(SensorNetwork::from_adjacency(*config.adjacency),
                                             types, config.network_seed);
        } else {
            proj = build_projectile_scenario(config.N, config.network_seed);
        }
        sc.global = std::move(proj.global);
        sc.network = std::move(proj.network);
        sc.locals = std::move(proj.locals);
        sc.types = std::move(proj.types);
        sc.perms = std::move(proj.perms);
        sc.r = proj.r;
        sc.xhat0 = proj.xhat0;
        sc.V0 = proj.V0;
        sc.radius = proj.radius;
    } else {
        if (!config.custom) throw std::invalid_argument("custom model requires matrices");
        if (!config.adjacency) {
            throw std::invalid_argument("custom model requires an explicit adjacency");
        }
        sc.network = SensorNetwork::from_adjacency(*config.adjacency);
        if (static_cast<int>(config.custom->nodes.size()) != sc.network.N) {
            throw std::invalid_argument("node model count must match the adjacency size");
        }
        sc.global = build_global_model(config.custom->A, config.custom->B, config.custom->nodes);
        sc.locals = build_all_local_models(sc.network, config.custom->nodes);
        if (config.deterministic_input) {
            if (config.deterministic_input->size() != sc.global.n()) {
                throw std::invalid_argument("deterministic input has the wrong dimension");
            }
            sc.r = *config.deterministic_input;
        }
        sc.xhat0 = Vec::Zero(sc.global.n());
        sc.V0 = Mat::Identity(sc.global.n(), sc.global.n());
    }
    return sc;
}

AnalysisResult run_analysis(const ScenarioBundle& sc, double c, double consensus_eps, int T,
                            const WindowSpec& window) {
    AnalysisResult out;
    out.T = T;
    out.c = c;
    out.window_begin = static_cast<int>(std::lround(window.alpha * T));
    out.window_end = static_cast<int>(std::lround(window.beta * T));
    if (out.window_begin < 0 || out.window_end > T || out.window_begin >= out.window_end) {
        throw std::invalid_argument("steady-state window does not fit the horizon");
    }
    const Tolerance tol_c(c);

    try {
        out.schedule = forward_gain_sweep(sc.global, tol_c, sc.V0, T);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("forward gain sweep: ") + e.what());
    }
    try {
        out.backward = backward_omega_sweep(sc.global, out.schedule);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("backward synthesis: ") + e.what());
    }
    std::vector<LfStage> stages;
    try {
        stages = synthesize_lf_model(sc.global, out.schedule, out.backward);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("worst-case model assembly: ") + e.what());
    }

    out.theta_central.resize(T + 1);
    for (int t = 0; t <= T; ++t) out.theta_central(t) = out.schedule.theta[t];

    // Distributed risk parameters do not depend on the combination weights or
    // on any measurement, only on each neighborhood's information matrix.
    out.theta_nodes.resize(T + 1, sc.network.N);
    {
        const Mat BBt = sc.global.BBt();
        std::vector<Mat> V(sc.network.N, sc.V0);
        for (int t = 0; t <= T; ++t) {
            for (int k = 0; k < sc.network.N; ++k) {
                const CovarianceStep cs =
                    covariance_step(sc.global.A, BBt, sc.locals[k].S, V[k], tol_c);
                out.theta_nodes(t, k) = cs.theta;
                V[k] = cs.V;
            }
        }
    }

    const CentralView central = centralize(sc);
    const DiffusionWeights w_degree = build_diffusion_weights(sc.network, WeightRule::Degree);
    const DiffusionWeights w_cons =
        build_diffusion_weights(sc.network, WeightRule::Consensus, consensus_eps);
    const DiffusionWeights w_local = build_diffusion_weights(sc.network, WeightRule::Identity);

    for (Variant v : all_variants()) {
        const double cf = variant_is_robust(v) ? c : 0.0;
        try {
            if (variant_is_central(v)) {
                out.variants.push_back(analyze_variant(
                    v, central.network, central.global, central.locals, central.weights, cf,
                    stages, sc.V0, T, out.window_begin, out.window_end));
            } else {
                const DiffusionWeights& w =
                    (v == Variant::RkfDiffusion || v == Variant::KfDiffusion) ? w_degree
                    : (v == Variant::RkfConsensus || v == Variant::KfConsensus) ? w_cons
                                                                                : w_local;
                out.variants.push_back(analyze_variant(v, sc.network, sc.global, sc.locals, w,
                                                       cf, stages, sc.V0, T, out.window_begin,
                                                       out.window_end));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("performance sweep for " + variant_label(v) + ": " +
                                     e.what());
        }
    }
    return out;
}

MonteCarloResult run_monte_carlo(const ScenarioBundle& sc, const AnalysisResult& analysis,
                                 double consensus_eps, int runs, std::uint64_t master_seed) {
    if (runs < 1) throw std::invalid_argument("Monte Carlo needs at least one run");
    const std::vector<LfStage> stages =
        synthesize_lf_model(sc.global, analysis.schedule, analysis.backward);

    const Vec* r = sc.r.size() > 0 ? &sc.r : nullptr;
    std::vector<Trajectory> trajectories;
    trajectories.reserve(runs);
    for (int i = 0; i < runs; ++i) {
        std::mt19937_64 rng = make_stream(master_seed, static_cast<std::uint64_t>(i));
        trajectories.push_back(simulate_lf(stages, sc.xhat0, sc.V0, analysis.T, rng, r));
    }

    const DiffusionWeights w_degree = build_diffusion_weights(sc.network, WeightRule::Degree);
    const DiffusionWeights w_cons =
        build_diffusion_weights(sc.network, WeightRule::Consensus, consensus_eps);
    const DiffusionWeights w_local = build_diffusion_weights(sc.network, WeightRule::Identity);

    std::vector<FilterConfig> configs;
    for (Variant v : all_variants()) {
        FilterConfig fc;
        fc.label = variant_label(v);
        fc.centralized = variant_is_central(v);
        fc.c = variant_is_robust(v) ? analysis.c : 0.0;
        if (!fc.centralized) {
            fc.weights = (v == Variant::RkfDiffusion || v == Variant::KfDiffusion) ? w_degree
                         : (v == Variant::RkfConsensus || v == Variant::KfConsensus)
                             ? w_cons
                             : w_local;
        }
        configs.push_back(std::move(fc));
    }

    MonteCarloResult mc;
    mc.runs = runs;
    mc.traces = run_filter_bank(sc.global, sc.network, sc.locals, trajectories, configs,
                                sc.xhat0, sc.V0, r);
    for (const ErrorTrace& trace : mc.traces) {
        mc.steady.push_back(empirical_msd(trace, analysis.window_begin, analysis.window_end));
    }
    return mc;
}

namespace {

void write_msd_avg(const std::string& path, const AnalysisResult& analysis) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t";
    for (const VariantResult& v : analysis.variants) out << "," << v.label;
    out << "\n";
    for (int t = 0; t <= analysis.T; ++t) {
        out << t;
        for (const VariantResult& v : analysis.variants) {
            out << "," << fmt17(v.trace.msd_avg(t));
        }
        out << "\n";
    }
}

void write_msd_nodes(const std::string& path, const AnalysisResult& analysis, int N) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "node";
    for (const VariantResult& v : analysis.variants) out << "," << v.label;
    out << "\n";
    for (int k = 0; k < N; ++k) {
        out << (k + 1);
        for (const VariantResult& v : analysis.variants) {
            // Centralized predictors have one estimator; its value is repeated
            // on every node row for side-by-side comparison.
            const double value =
                v.steady_node.size() == N ? v.steady_node(k) : v.steady_node(0);
            out << "," << fmt17(value);
        }
        out << "\n";
    }
}

void write_theta(const std::string& path, const AnalysisResult& analysis) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    const int N = static_cast<int>(analysis.theta_nodes.cols());
    out << "t,theta_central";
    for (int k = 0; k < N; ++k) out << ",theta_node_" << (k + 1);
    out << "\n";
    for (int t = 0; t <= analysis.T; ++t) {
        out << t << "," << fmt17(analysis.theta_central(t));
        for (int k = 0; k < N; ++k) out << "," << fmt17(analysis.theta_nodes(t, k));
        out << "\n";
    }
}

void write_mc_csv(const std::string& avg_path, const std::string& nodes_path,
                  const MonteCarloResult& mc, int N, int T) {
    {
        std::ofstream out(avg_path);
        if (!out) throw std::runtime_error("cannot write " + avg_path);
        out << "t";
        for (const ErrorTrace& tr : mc.traces) out << "," << tr.label;
        out << "\n";
        for (int t = 0; t <= T; ++t) {
            out << t;
            for (const ErrorTrace& tr : mc.traces) {
                out << "," << fmt17(tr.msd_node.row(t).mean());
            }
            out << "\n";
        }
    }
    {
        std::ofstream out(nodes_path);
        if (!out) throw std::runtime_error("cannot write " + nodes_path);
        out << "node";
        for (const ErrorTrace& tr : mc.traces) out << "," << tr.label;
        out << "\n";
        for (int k = 0; k < N; ++k) {
            out << (k + 1);
            for (std::size_t i = 0; i < mc.traces.size(); ++i) {
                out << "," << fmt17(mc.steady[i].per_node(k));
            }
            out << "\n";
        }
    }
}

// Long-format dump of the assembled worst-case model, one value per row, for
// offline inspection of the time-varying system matrices.
void write_lf_model(const std::string& path, const std::vector<LfStage>& stages) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,matrix,row,col,value\n";
    const auto emit_block = [&](int t, const char* name, const Mat& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                out << t << "," << name << "," << r << "," << c << "," << fmt17(m(r, c))
                    << "\n";
            }
        }
    };
    for (std::size_t t = 0; t < stages.size(); ++t) {
        emit_block(static_cast<int>(t), "A", stages[t].A_lf);
        emit_block(static_cast<int>(t), "B", stages[t].B_lf);
        emit_block(static_cast<int>(t), "C", stages[t].C_lf);
        emit_block(static_cast<int>(t), "D", stages[t].D_lf);
    }
}

json config_to_json(const ScenarioConfig& config, const ScenarioBundle& sc) {
    json j;
    j["model"]["type"] = config.model_type;
    if (config.custom) {
        j["model"]["A"] = matrix_to_json(config.custom->A);
        j["model"]["B"] = matrix_to_json(config.custom->B);
        json nodes = json::array();
        for (const NodeModel& node : config.custom->nodes) {
            json nj;
            nj["C"] = matrix_to_json(node.C);
            nj["D"] = matrix_to_json(node.D);
            nodes.push_back(nj);
        }
        j["model"]["nodes"] = nodes;
    }
    if (sc.r.size() > 0) {
        json r = json::array();
        for (Eigen::Index i = 0; i < sc.r.size(); ++i) r.push_back(sc.r(i));
        j["model"]["r"] = r;
    }
    j["network"]["N"] = sc.network.N;
    j["network"]["seed"] = config.network_seed;
    j["network"]["adjacency"] = matrix_to_json(sc.network.adjacency.cast<double>());
    if (!sc.types.empty()) {
        json types = json::array();
        for (SensorType t : sc.types) types.push_back(sensor_type_name(t));
        j["network"]["types"] = types;
        json perms = json::array();
        for (const auto& p : sc.perms) perms.push_back({p[0], p[1], p[2]});
        j["network"]["noise_permutations"] = perms;
        j["network"]["radius"] = sc.radius;
    }
    j["tolerance"] = config.c;
    j["consensus_epsilon"] = config.consensus_eps;
    j["horizon"] = config.horizon;
    j["window"]["alpha"] = config.window.alpha;
    j["window"]["beta"] = config.window.beta;
    j["mc_runs"] = config.mc_runs;
    j["seed"] = config.master_seed;
    j["out_dir"] = config.out_dir;
    j["dump_lf"] = config.dump_lf;
    return j;
}

}  // namespace

ExperimentOutputs run_experiment(const ScenarioConfig& config) {
    namespace fs = std::filesystem;
    const ScenarioBundle sc = build_scenario(config);

    ExperimentOutputs outputs;
    outputs.analysis =
        run_analysis(sc, config.c, config.consensus_eps, config.horizon, config.window);
    if (config.mc_runs > 0) {
        outputs.monte_carlo = run_monte_carlo(sc, outputs.analysis, config.consensus_eps,
                                              config.mc_runs, config.master_seed);
    }

    fs::create_directories(config.out_dir);
    const auto emit = [&](const std::string& name) {
        outputs.files_written.push_back((fs::path(config.out_dir) / name).string());
        return outputs.files_written.back();
    };

    write_msd_avg(emit("msd_avg.csv"), outputs.analysis);
    write_msd_nodes(emit("msd_nodes.csv"), outputs.analysis, sc.network.N);
    write_theta(emit("theta.csv"), outputs.analysis);
    if (outputs.monte_carlo) {
        const std::string avg = emit("msd_avg_mc.csv");
        const std::string nodes = emit("msd_nodes_mc.csv");
        write_mc_csv(avg, nodes, *outputs.monte_carlo, sc.network.N, outputs.analysis.T);
    }
    if (config.dump_lf) {
        write_lf_model(emit("lf_model.csv"),
                       synthesize_lf_model(sc.global, outputs.analysis.schedule,
                                           outputs.analysis.backward));
    }

    json manifest = config_to_json(config, sc);
    manifest["window_steps"] = {outputs.analysis.window_begin, outputs.analysis.window_end};
    json variant_names = json::array();
    for (Variant v : all_variants()) variant_names.push_back(variant_label(v));
    manifest["variants"] = variant_names;
    json files = json::array();
    for (const std::string& f : outputs.files_written) files.push_back(f);
    manifest["outputs"] = files;

    const std::string manifest_path = emit("manifest.json");
    std::ofstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot write " + manifest_path);
    mf << manifest.dump(2) << "\n";
    return outputs;
}

bool validate_scenario(const ScenarioConfig& config, std::ostream& report) {
    bool ok = true;
    const auto fail = [&](const std::string& msg) {
        report << "FAIL  " << msg << "\n";
        ok = false;
    };
    const auto pass = [&](const std::string& msg) { report << "ok    " << msg << "\n"; };

    ScenarioBundle sc;
    try {
        sc = build_scenario(config);
        pass("scenario constructed (n=" + std::to_string(sc.global.n()) +
             ", N=" + std::to_string(sc.network.N) +
             ", stacked outputs=" + std::to_string(sc.global.total_p()) + ")");
    } catch (const std::exception& e) {
        fail(std::string("scenario construction: ") + e.what());
        return false;
    }

    if (!sc.network.connected()) fail("network is not connected");
    else pass("network connected");

    if (check_reachability(sc.global.A, sc.global.B)) pass("(A, B) reachable");
    else fail("(A, B) is not reachable");
    if (check_observability(sc.global.A, sc.global.C)) pass("(A, C) observable");
    else fail("(A, C) is not observable");

    for (int k = 0; k < sc.network.N; ++k) {
        if (!check_observability(sc.global.A, sc.locals[k].C_loc)) {
            fail("neighborhood of node " + std::to_string(k) + " is not locally observable");
        }
    }
    pass("local observability checked for every node");

    try {
        const DiffusionWeights degree = build_diffusion_weights(sc.network, WeightRule::Degree);
        const DiffusionWeights cons =
            build_diffusion_weights(sc.network, WeightRule::Consensus, config.consensus_eps);
        const DiffusionWeights ident =
            build_diffusion_weights(sc.network, WeightRule::Identity);
        for (const auto* w : {&degree, &cons, &ident}) {
            const WeightDiagnostics d = validate_weights(w->W, sc.network);
            if (!d.pass()) {
                fail("weight diagnostics: column deviation " +
                     std::to_string(d.max_column_deviation) + ", min entry " +
                     std::to_string(d.min_entry) + ", " +
                     std::to_string(d.support_violations.size()) + " support violations");
            }
        }
        pass("diffusion, consensus and identity weights valid");
    } catch (const std::exception& e) {
        fail(std::string("weight construction: ") + e.what());
    }

    if (config.horizon < 2) fail("horizon must be at least 2");
    else pass("horizon " + std::to_string(config.horizon));
    return ok;
}

}  // namespace drkf
