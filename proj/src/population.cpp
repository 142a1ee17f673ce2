#include "gpbt/population.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gpbt/errors.hpp"

namespace gpbt {

void CheckpointStore::attach_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create checkpoint directory " + dir.string() +
                      ": " + ec.message());
    }
    std::lock_guard lock(mu_);
    dir_ = dir;
}

CheckpointRef CheckpointStore::put(AgentId agent, std::int64_t step, Blob blob) {
    auto shared = std::make_shared<const Blob>(std::move(blob));
    std::optional<std::filesystem::path> dir;
    {
        std::lock_guard lock(mu_);
        auto [it, inserted] = blobs_.emplace(std::make_pair(agent, step), shared);
        if (!inserted) {
            throw SequencingError("checkpoint (agent " + std::to_string(agent) +
                                  ", step " + std::to_string(step) +
                                  ") already written");
        }
        dir = dir_;
    }
    if (dir) {
        const auto path = *dir / ("agent_" + std::to_string(agent) + "_step_" +
                                  std::to_string(step) + ".ckpt");
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(shared->data()),
                  static_cast<std::streamsize>(shared->size()));
        if (!out) {
            throw IoError("failed to write checkpoint file " + path.string());
        }
    }
    return CheckpointRef{agent, step};
}

std::shared_ptr<const Blob> CheckpointStore::get(const CheckpointRef& ref) const {
    std::lock_guard lock(mu_);
    auto it = blobs_.find(std::make_pair(ref.agent, ref.step));
    if (it == blobs_.end()) {
        throw std::domain_error("unknown checkpoint (agent " +
                                std::to_string(ref.agent) + ", step " +
                                std::to_string(ref.step) + ")");
    }
    return it->second;
}

Population::Population(const SearchSpace& space,
                       std::vector<HyperVector> initial_hp) {
    agents_.reserve(initial_hp.size());
    for (std::size_t i = 0; i < initial_hp.size(); ++i) {
        AgentState a;
        a.id = i;
        a.hp = std::move(initial_hp[i]);
        a.vel = zero_velocity(space);
        a.checkpoint = CheckpointRef{i, 0};  // executor stores blob (i, 0)
        agents_.push_back(std::move(a));
    }
}

void Population::check_id(AgentId id) const {
    if (id >= agents_.size()) {
        throw std::domain_error("unknown agent id " + std::to_string(id));
    }
}

AgentState& Population::agent(AgentId id) {
    check_id(id);
    return agents_[id];
}

const AgentState& Population::agent(AgentId id) const {
    check_id(id);
    return agents_[id];
}

PerfRecord Population::record_result(AgentId id, std::int64_t step,
                                     double score) {
    check_id(id);
    if (!std::isfinite(score)) {
        throw std::domain_error("non-finite score reported by agent " +
                                std::to_string(id));
    }
    auto& a = agents_[id];
    if (!a.history.empty() && step <= a.history.back().step) {
        throw SequencingError("agent " + std::to_string(id) +
                              " reported step " + std::to_string(step) +
                              " after step " +
                              std::to_string(a.history.back().step));
    }
    PerfRecord rec{step, score, next_wall_order_++};
    a.history.push_back(rec);
    return rec;
}

void Population::overwrite_latest_score(AgentId id, double score) {
    check_id(id);
    auto& a = agents_[id];
    if (a.history.empty()) {
        throw std::logic_error("agent " + std::to_string(id) +
                               " has no record to overwrite");
    }
    a.history.back().score = score;
}

std::optional<double> Population::latest_score(AgentId id) const {
    check_id(id);
    const auto& h = agents_[id].history;
    if (h.empty()) {
        return std::nullopt;
    }
    return h.back().score;
}

std::vector<AgentId> Population::rank_snapshot() const {
    std::vector<AgentId> ids(agents_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (agents_[i].history.empty()) {
            throw std::logic_error("rank_snapshot: agent " + std::to_string(i) +
                                   " has no recorded result");
        }
        ids[i] = i;
    }
    std::sort(ids.begin(), ids.end(), [this](AgentId a, AgentId b) {
        const double sa = agents_[a].history.back().score;
        const double sb = agents_[b].history.back().score;
        if (sa != sb) {
            return sa > sb;
        }
        return a < b;
    });
    return ids;
}

QuartileSets quartile_membership(const std::vector<AgentId>& ranked, double q) {
    const std::size_t n = ranked.size();
    if (n < 2) {
        throw ConfigError("quartile membership requires a population of >= 2");
    }
    if (!(q > 0.0 && q <= 0.5)) {
        throw ConfigError("quantile fraction must lie in (0, 0.5]");
    }
    const std::size_t k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(q * static_cast<double>(n))));
    QuartileSets sets;
    sets.top.assign(ranked.begin(), ranked.begin() + static_cast<long>(k));
    sets.bottom.assign(ranked.end() - static_cast<long>(k), ranked.end());
    return sets;
}

}  // namespace gpbt
