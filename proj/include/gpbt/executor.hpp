#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gpbt/scheduler.hpp"
#include "gpbt/trainables.hpp"

namespace gpbt {

struct ExecMode {
    enum class Kind { SequentialDeterministic, Concurrent };
    Kind kind = Kind::SequentialDeterministic;
    unsigned workers = 1;  // concurrent mode only

    void validate(std::size_t population) const;
};

using TrainableFactory = std::function<std::unique_ptr<Trainable>(AgentId)>;

struct RunSpec {
    SearchSpace space;
    SchedulerConfig scheduler;
    ExecMode mode;
    std::uint64_t master_seed = 0;
    std::int64_t report_granularity = 1;  // steps per slice/report
    TrainableFactory make_trainable;
    std::optional<std::filesystem::path> checkpoint_dir;
};

struct AgentSnapshot {
    AgentId id = 0;
    std::vector<double> hp_natural;
    std::vector<double> velocity;
    std::int64_t steps_trained = 0;
    std::int64_t generation = 0;
    double latest_score = 0.0;
};

struct RunArtifacts {
    std::vector<std::vector<PerfRecord>> series;  // per agent
    std::vector<SchedulerEvent> events;
    std::vector<AgentSnapshot> final_population;
    std::uint64_t updates_applied = 0;
    // Real elapsed time in concurrent mode; 0 under the deterministic
    // executor so artifacts stay byte-reproducible.
    double wall_seconds = 0.0;
};

// Runs one population to completion.
//
// Sequential mode advances agents in round-robin slices of
// report_granularity steps and is bit-deterministic for a fixed master
// seed. Concurrent mode runs `workers` lanes, each pulling the
// least-advanced runnable agent (ties to the lower id); strategy randomness
// stays reproducible through the per-agent streams, but event interleaving
// is not, and reports from in-flight workers may trail the stop event.
// With workers == 1 the dispatch rule reduces to the sequential order.
RunArtifacts run(const RunSpec& spec);

}  // namespace gpbt
