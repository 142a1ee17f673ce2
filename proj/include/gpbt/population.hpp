#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "gpbt/hyperspace.hpp"
#include "gpbt/serialize.hpp"

namespace gpbt {

using AgentId = std::size_t;

struct PerfRecord {
    std::int64_t step = 0;
    double score = 0.0;
    std::uint64_t wall_order = 0;  // global arrival sequence number
};

// Key of one stored checkpoint; resolves to exactly one immutable blob.
struct CheckpointRef {
    AgentId agent = 0;
    std::int64_t step = 0;

    friend bool operator==(const CheckpointRef&, const CheckpointRef&) = default;
};

// Write-once blob store. Concurrent reads and inserts are safe; population
// state itself is owned by the scheduler and never touched here.
class CheckpointStore {
public:
    CheckpointStore() = default;

    // Also mirrors blobs to one file per (agent, step) when set.
    void attach_directory(const std::filesystem::path& dir);

    CheckpointRef put(AgentId agent, std::int64_t step, Blob blob);
    std::shared_ptr<const Blob> get(const CheckpointRef& ref) const;

private:
    mutable std::mutex mu_;
    std::map<std::pair<AgentId, std::int64_t>, std::shared_ptr<const Blob>> blobs_;
    std::optional<std::filesystem::path> dir_;
};

struct AgentState {
    AgentId id = 0;
    HyperVector hp;        // internal coordinates
    VelocityVector vel;    // zero until the first hyperparameter update
    std::int64_t steps_trained = 0;
    std::int64_t last_update_step = 0;
    std::int64_t generation = 0;  // hyperparameter updates applied
    std::vector<PerfRecord> history;
    CheckpointRef checkpoint;
};

class Population {
public:
    Population(const SearchSpace& space, std::vector<HyperVector> initial_hp);

    std::size_t size() const { return agents_.size(); }
    AgentState& agent(AgentId id);
    const AgentState& agent(AgentId id) const;
    const std::vector<AgentState>& agents() const { return agents_; }

    // Appends to the agent's history; steps must be strictly increasing per
    // agent (SequencingError otherwise). wall_order is a global counter.
    PerfRecord record_result(AgentId id, std::int64_t step, double score);

    // Replaces the score of the agent's most recent record (used when a slow
    // learner inherits the source's weights and with them its evaluation).
    void overwrite_latest_score(AgentId id, double score);

    std::optional<double> latest_score(AgentId id) const;

    // All agent ids, descending by latest score, ties to the lower id.
    // Requires every agent to have at least one record.
    std::vector<AgentId> rank_snapshot() const;

private:
    void check_id(AgentId id) const;

    std::vector<AgentState> agents_;
    std::uint64_t next_wall_order_ = 0;
};

struct QuartileSets {
    std::vector<AgentId> top;     // first k of the ranking
    std::vector<AgentId> bottom;  // last k
};

// k = max(1, floor(q*n)); requires n >= 2 and 0 < q <= 0.5 so the sets are
// disjoint and replacement pressure exists for any population size.
QuartileSets quartile_membership(const std::vector<AgentId>& ranked, double q);

}  // namespace gpbt
