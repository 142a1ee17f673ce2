#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gpbt/executor.hpp"

namespace gpbt {

enum class OptimizerKind { GpbtPl, Pbt, Rs };

const char* optimizer_name(OptimizerKind k);
OptimizerKind optimizer_from_name(const std::string& name);

struct TrainableConfig {
    std::string kind;  // surrogate_quadratic | drifting_sphere | gridworld_q
    // surrogate_quadratic
    double eta0 = 0.01;
    std::array<double, 2> theta0{1.0, 1.0};
    // drifting_sphere
    double amplitude = 1.0;
    double omega = 0.05;
    double phase_stride = 1.0;
    double noise_sigma = -1.0;  // <0 selects the default
};

// One experiment file fully determines a run grid: every configured
// optimizer is executed for every seed.
struct ExperimentConfig {
    std::string name;
    TrainableConfig trainable;
    std::vector<DimensionSpec> space_dims;
    SchedulerConfig scheduler;  // strategy.kind is overridden per optimizer
    std::vector<OptimizerKind> optimizers;
    ExecMode exec;
    std::vector<std::uint64_t> seeds;
    std::int64_t report_granularity = 1;
    std::string output_dir = "out";
    bool write_checkpoints = false;
};

// Parses and validates; throws ConfigError listing every failure with its
// field path.
ExperimentConfig load_config(const std::filesystem::path& path);

// Full validation pass, also run by load_config.
void validate_config(const ExperimentConfig& cfg);

// Scheduler configuration for one grid cell: gpbt_pl selects pairwise
// learning, pbt the perturb strategy, rs disables updates entirely.
SchedulerConfig scheduler_for(const ExperimentConfig& cfg, OptimizerKind opt);

// Factory for the configured trainable; validates kind/space compatibility.
TrainableFactory trainable_factory(const ExperimentConfig& cfg);

SearchSpace space_from(const ExperimentConfig& cfg);

}  // namespace gpbt
