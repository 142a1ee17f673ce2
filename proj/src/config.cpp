#include "gpbt/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <sstream>

#include "gpbt/errors.hpp"
#include "gpbt/trainables.hpp"

namespace gpbt {

namespace {

// Collects field-path diagnostics so one pass reports every problem.
struct Diagnostics {
    std::vector<std::string> errors;

    void add(const std::string& path, const std::string& message) {
        errors.push_back(path + ": " + message);
    }
    void raise_if_any() const {
        if (errors.empty()) {
            return;
        }
        std::ostringstream out;
        out << "invalid configuration (" << errors.size() << " problem"
            << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors) {
            out << "\n  - " << e;
        }
        throw ConfigError(out.str());
    }
};

template <typename T>
bool read_scalar(const YAML::Node& node, const std::string& path, T& out,
                 Diagnostics& diag) {
    if (!node) {
        return false;
    }
    try {
        out = node.as<T>();
        return true;
    } catch (const YAML::Exception&) {
        diag.add(path, "has the wrong type");
        return false;
    }
}

DimScale scale_from(const std::string& s, const std::string& path,
                    Diagnostics& diag) {
    if (s == "linear") return DimScale::Linear;
    if (s == "log" || s == "logarithmic") return DimScale::Log;
    diag.add(path, "must be 'linear' or 'log', got '" + s + "'");
    return DimScale::Linear;
}

DimKind kind_from(const std::string& s, const std::string& path,
                  Diagnostics& diag) {
    if (s == "continuous") return DimKind::Continuous;
    if (s == "integer") return DimKind::Integer;
    diag.add(path, "must be 'continuous' or 'integer', got '" + s + "'");
    return DimKind::Continuous;
}

void parse_space(const YAML::Node& node, ExperimentConfig& cfg,
                 Diagnostics& diag) {
    if (!node || !node.IsSequence() || node.size() == 0) {
        diag.add("space", "must be a non-empty list of dimensions");
        return;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string base = "space[" + std::to_string(i) + "]";
        const YAML::Node d = node[i];
        DimensionSpec dim;
        if (!read_scalar(d["name"], base + ".name", dim.name, diag)) {
            diag.add(base + ".name", "is required");
        }
        std::string s;
        if (read_scalar(d["kind"], base + ".kind", s, diag)) {
            dim.kind = kind_from(s, base + ".kind", diag);
        }
        if (!read_scalar(d["lower"], base + ".lower", dim.lower, diag)) {
            diag.add(base + ".lower", "is required");
        }
        if (!read_scalar(d["upper"], base + ".upper", dim.upper, diag)) {
            diag.add(base + ".upper", "is required");
        }
        if (read_scalar(d["scale"], base + ".scale", s, diag)) {
            dim.scale = scale_from(s, base + ".scale", diag);
        }
        cfg.space_dims.push_back(std::move(dim));
    }
}

void parse_trainable(const YAML::Node& node, ExperimentConfig& cfg,
                     Diagnostics& diag) {
    if (!node || !node.IsMap()) {
        diag.add("trainable", "must be a map with at least 'kind'");
        return;
    }
    auto& t = cfg.trainable;
    if (!read_scalar(node["kind"], "trainable.kind", t.kind, diag)) {
        diag.add("trainable.kind", "is required");
    }
    read_scalar(node["eta0"], "trainable.eta0", t.eta0, diag);
    if (const YAML::Node th = node["theta0"]) {
        if (th.IsSequence() && th.size() == 2) {
            read_scalar(th[0], "trainable.theta0[0]", t.theta0[0], diag);
            read_scalar(th[1], "trainable.theta0[1]", t.theta0[1], diag);
        } else {
            diag.add("trainable.theta0", "must be a list of two reals");
        }
    }
    read_scalar(node["amplitude"], "trainable.amplitude", t.amplitude, diag);
    read_scalar(node["omega"], "trainable.omega", t.omega, diag);
    read_scalar(node["phase_stride"], "trainable.phase_stride", t.phase_stride,
                diag);
    read_scalar(node["noise_sigma"], "trainable.noise_sigma", t.noise_sigma,
                diag);
}

void parse_scheduler(const YAML::Node& node, ExperimentConfig& cfg,
                     Diagnostics& diag) {
    if (!node || !node.IsMap()) {
        diag.add("scheduler", "must be a map");
        return;
    }
    auto& s = cfg.scheduler;
    read_scalar(node["population"], "scheduler.population", s.population, diag);
    read_scalar(node["delta"], "scheduler.delta", s.delta, diag);
    read_scalar(node["quantile"], "scheduler.quantile", s.quantile, diag);
    std::string pairing;
    if (read_scalar(node["pairing"], "scheduler.pairing", pairing, diag)) {
        if (pairing == "quartile_top_bottom") {
            s.pairing = PairingMode::QuartileTopBottom;
        } else if (pairing == "random_pair") {
            s.pairing = PairingMode::RandomPair;
        } else {
            diag.add("scheduler.pairing",
                     "must be 'quartile_top_bottom' or 'random_pair'");
        }
    }
    read_scalar(node["resample_prob"], "scheduler.resample_prob",
                s.strategy.resample_prob, diag);
    read_scalar(node["resample_per_dimension"],
                "scheduler.resample_per_dimension",
                s.strategy.resample_per_dimension, diag);
    if (const YAML::Node f = node["perturb_factors"]) {
        if (f.IsSequence() && f.size() == 2) {
            read_scalar(f[0], "scheduler.perturb_factors[0]",
                        s.strategy.perturb_shrink, diag);
            read_scalar(f[1], "scheduler.perturb_factors[1]",
                        s.strategy.perturb_grow, diag);
        } else {
            diag.add("scheduler.perturb_factors",
                     "must be a list of two factors");
        }
    }
    const YAML::Node stop = node["stop"];
    if (!stop || !stop.IsMap()) {
        diag.add("scheduler.stop",
                 "must set either total_steps or target_score");
        return;
    }
    const bool has_steps = static_cast<bool>(stop["total_steps"]);
    const bool has_target = static_cast<bool>(stop["target_score"]);
    if (has_steps == has_target) {
        diag.add("scheduler.stop",
                 "must set exactly one of total_steps or target_score");
    } else if (has_steps) {
        s.stop.kind = StopRule::Kind::TotalSteps;
        read_scalar(stop["total_steps"], "scheduler.stop.total_steps",
                    s.stop.total_steps, diag);
    } else {
        s.stop.kind = StopRule::Kind::TargetScore;
        read_scalar(stop["target_score"], "scheduler.stop.target_score",
                    s.stop.target_score, diag);
    }
}

void parse_exec(const YAML::Node& node, ExperimentConfig& cfg,
                Diagnostics& diag) {
    if (!node) {
        return;  // sequential by default
    }
    std::string mode;
    if (read_scalar(node["mode"], "exec.mode", mode, diag)) {
        if (mode == "sequential") {
            cfg.exec.kind = ExecMode::Kind::SequentialDeterministic;
        } else if (mode == "concurrent") {
            cfg.exec.kind = ExecMode::Kind::Concurrent;
        } else {
            diag.add("exec.mode", "must be 'sequential' or 'concurrent'");
        }
    }
    read_scalar(node["workers"], "exec.workers", cfg.exec.workers, diag);
}

}  // namespace

const char* optimizer_name(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::GpbtPl: return "gpbt_pl";
        case OptimizerKind::Pbt: return "pbt";
        case OptimizerKind::Rs: return "rs";
    }
    return "?";
}

OptimizerKind optimizer_from_name(const std::string& name) {
    if (name == "gpbt_pl") return OptimizerKind::GpbtPl;
    if (name == "pbt") return OptimizerKind::Pbt;
    if (name == "rs") return OptimizerKind::Rs;
    throw ConfigError("optimizers: unknown optimizer '" + name +
                      "' (expected gpbt_pl, pbt, or rs)");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        throw IoError("cannot read config file " + path.string());
    } catch (const YAML::Exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }

    ExperimentConfig cfg;
    Diagnostics diag;

    if (!read_scalar(root["name"], "name", cfg.name, diag) ||
        cfg.name.empty()) {
        diag.add("name", "is required");
    }
    parse_trainable(root["trainable"], cfg, diag);
    parse_space(root["space"], cfg, diag);
    parse_scheduler(root["scheduler"], cfg, diag);
    parse_exec(root["exec"], cfg, diag);

    if (const YAML::Node opts = root["optimizers"];
        opts && opts.IsSequence() && opts.size() > 0) {
        for (std::size_t i = 0; i < opts.size(); ++i) {
            std::string s;
            if (read_scalar(opts[i], "optimizers[" + std::to_string(i) + "]", s,
                            diag)) {
                try {
                    cfg.optimizers.push_back(optimizer_from_name(s));
                } catch (const ConfigError& e) {
                    diag.add("optimizers[" + std::to_string(i) + "]", e.what());
                }
            }
        }
    } else {
        diag.add("optimizers", "must be a non-empty list");
    }

    if (const YAML::Node seeds = root["seeds"];
        seeds && seeds.IsSequence() && seeds.size() > 0) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            std::uint64_t s = 0;
            if (read_scalar(seeds[i], "seeds[" + std::to_string(i) + "]", s,
                            diag)) {
                cfg.seeds.push_back(s);
            }
        }
    } else {
        diag.add("seeds", "must be a non-empty list");
    }

    read_scalar(root["report_granularity"], "report_granularity",
                cfg.report_granularity, diag);
    read_scalar(root["output_dir"], "output_dir", cfg.output_dir, diag);
    read_scalar(root["write_checkpoints"], "write_checkpoints",
                cfg.write_checkpoints, diag);

    diag.raise_if_any();
    validate_config(cfg);
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    Diagnostics diag;

    try {
        SearchSpace space(cfg.space_dims);
        try {
            trainable_factory(cfg);
        } catch (const ConfigError& e) {
            diag.add("trainable", e.what());
        }
    } catch (const ConfigError& e) {
        diag.add("space", e.what());
    }
    try {
        cfg.scheduler.validate();
    } catch (const ConfigError& e) {
        diag.errors.push_back(e.what());
    }
    if (cfg.report_granularity <= 0) {
        diag.add("report_granularity", "must be > 0");
    }
    if (cfg.scheduler.stop.kind == StopRule::Kind::TotalSteps &&
        cfg.scheduler.stop.total_steps < cfg.report_granularity) {
        diag.add("scheduler.stop.total_steps",
                 "must be >= report_granularity");
    }
    if (cfg.seeds.empty()) {
        diag.add("seeds", "must be non-empty");
    }
    if (cfg.optimizers.empty()) {
        diag.add("optimizers", "must be non-empty");
    }
    if (cfg.exec.kind == ExecMode::Kind::Concurrent && cfg.exec.workers < 1) {
        diag.add("exec.workers", "must be >= 1");
    }
    if (cfg.output_dir.empty()) {
        diag.add("output_dir", "must be non-empty");
    }

    diag.raise_if_any();
}

SchedulerConfig scheduler_for(const ExperimentConfig& cfg, OptimizerKind opt) {
    SchedulerConfig s = cfg.scheduler;
    switch (opt) {
        case OptimizerKind::GpbtPl:
            s.strategy.kind = StrategyKind::PairwiseLearning;
            break;
        case OptimizerKind::Pbt:
            s.strategy.kind = StrategyKind::Perturb;
            break;
        case OptimizerKind::Rs:
            // Random search never updates hyperparameters mid-run.
            s.strategy.kind = StrategyKind::None;
            break;
    }
    return s;
}

TrainableFactory trainable_factory(const ExperimentConfig& cfg) {
    const auto& t = cfg.trainable;
    const std::size_t dims = cfg.space_dims.size();
    if (t.kind == "surrogate_quadratic") {
        if (dims != 2) {
            throw ConfigError(
                "surrogate_quadratic needs a 2-dimensional space (h1, h2)");
        }
        const double eta0 = t.eta0;
        const auto theta0 = t.theta0;
        return [eta0, theta0](AgentId) {
            return std::make_unique<SurrogateQuadratic>(eta0, theta0);
        };
    }
    if (t.kind == "drifting_sphere") {
        const auto c = t;
        return [c, dims](AgentId) {
            return std::make_unique<DriftingSphere>(dims, c.amplitude, c.omega,
                                                    c.phase_stride,
                                                    c.noise_sigma);
        };
    }
    if (t.kind == "gridworld_q") {
        if (dims != 3) {
            throw ConfigError(
                "gridworld_q needs a 3-dimensional space: alpha, epsilon, "
                "gamma (in that order)");
        }
        return [](AgentId) { return std::make_unique<GridworldQ>(); };
    }
    throw ConfigError("unknown trainable kind '" + t.kind + "'");
}

SearchSpace space_from(const ExperimentConfig& cfg) {
    return SearchSpace(cfg.space_dims);
}

}  // namespace gpbt
