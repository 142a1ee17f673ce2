#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpbt/population.hpp"
#include "gpbt/strategies.hpp"

namespace gpbt {

enum class PairingMode { QuartileTopBottom, RandomPair };

struct StopRule {
    enum class Kind { TotalSteps, TargetScore };
    Kind kind = Kind::TotalSteps;
    std::int64_t total_steps = 0;  // per-agent budget T
    double target_score = 0.0;
};

struct SchedulerConfig {
    std::size_t population = 2;  // n
    std::int64_t delta = 1;      // perturbation interval, trainable steps
    double quantile = 0.25;      // q
    PairingMode pairing = PairingMode::QuartileTopBottom;
    StrategyConfig strategy;
    StopRule stop;

    void validate() const;  // throws ConfigError
};

enum class EventKind { Report, Ready, Continue, ExploitLearn, Resample, Stop };

const char* event_kind_name(EventKind k);

struct SchedulerEvent {
    std::uint64_t wall_order = 0;
    double elapsed_seconds = 0.0;  // virtual 0 under the deterministic executor
    AgentId agent = 0;
    EventKind kind = EventKind::Report;
    std::int64_t step = 0;
    double score = 0.0;
    std::vector<double> hp_natural;  // agent's vector after the decision
    std::optional<AgentId> source;   // set on exploit_learn / resample
};

struct UpdateAction {
    AgentId source = 0;
    UpdateOutcome outcome;
    CheckpointRef inherit_checkpoint;  // source's latest
};

// nullopt means Continue: the agent trains on unchanged.
using UpdateDecision = std::optional<UpdateAction>;

// GPBT control loop over one population. Calls must be serialized by the
// caller (the executor holds one lock around on_result); everything else --
// training, checkpoint blobs -- happens outside that region.
//
// Decision sequence per report:
//   1. record the result (monotone step per agent enforced)
//   2. interval gate: steps since last update < delta -> Continue
//   3. warm-up: some agent has no history yet -> Continue
//   4. quartile pairing: agent outside the bottom set -> Continue; otherwise
//      learn from a uniformly drawn member of the top set
//      random pairing: uniform partner; partner not strictly better ->
//      Continue (the fast learner is never modified)
// On an update the agent inherits the source's checkpoint and latest score,
// its generation increments and last_update_step advances.
class Scheduler {
public:
    Scheduler(const SearchSpace& space, SchedulerConfig cfg,
              std::vector<HyperVector> initial_hp, std::uint64_t master_seed);

    // fresh_checkpoint: the blob the agent saved for this report, already in
    // the store. elapsed_seconds stamps the emitted events.
    UpdateDecision on_result(AgentId agent, std::int64_t step, double score,
                             CheckpointRef fresh_checkpoint,
                             double elapsed_seconds = 0.0);

    bool finished() const { return finished_.load(std::memory_order_acquire); }
    AgentId best_agent() const;  // head of the ranking

    const Population& population() const { return population_; }
    const SchedulerConfig& config() const { return cfg_; }
    const std::vector<SchedulerEvent>& events() const { return events_; }
    std::uint64_t updates_applied() const { return updates_applied_; }

private:
    void append_event(EventKind kind, AgentId agent, std::int64_t step,
                      double elapsed_seconds, std::optional<AgentId> source);
    bool stop_rule_met() const;
    UpdateDecision learn_from(AgentId slow, AgentId source, std::int64_t step,
                              double elapsed_seconds);

    const SearchSpace& space_;
    SchedulerConfig cfg_;
    Population population_;
    std::vector<SchedulerEvent> events_;
    std::vector<RandomStream> scheduler_streams_;  // partner/source selection
    std::vector<RandomStream> strategy_streams_;   // update randomness
    std::uint64_t next_event_order_ = 0;
    std::uint64_t updates_applied_ = 0;
    std::atomic<bool> finished_{false};
    bool stop_emitted_ = false;
};

// True iff every agent reached the step budget (TotalSteps) or any latest
// score reached the target (TargetScore).
bool is_finished(const Population& population, const SchedulerConfig& cfg);

// One serialized event line: wall_order, timestamp, agent, kind, step,
// score, hp in natural units, source (or -).
std::string format_event_line(const SchedulerEvent& e);

}  // namespace gpbt
