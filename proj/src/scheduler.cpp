#include "gpbt/scheduler.hpp"

#include <algorithm>
#include <cstdio>

#include "gpbt/errors.hpp"

namespace gpbt {

void SchedulerConfig::validate() const {
    if (population < 2) {
        throw ConfigError("scheduler.population: must be >= 2");
    }
    if (delta <= 0) {
        throw ConfigError("scheduler.delta: must be > 0");
    }
    if (!(quantile > 0.0 && quantile <= 0.5)) {
        throw ConfigError("scheduler.quantile: must lie in (0, 0.5]");
    }
    if (!(strategy.resample_prob >= 0.0 && strategy.resample_prob <= 1.0)) {
        throw ConfigError("scheduler.strategy.resample_prob: must lie in [0, 1]");
    }
    if (!(strategy.perturb_shrink > 0.0) || !(strategy.perturb_grow > 0.0)) {
        throw ConfigError("scheduler.strategy.perturb factors: must be > 0");
    }
    if (stop.kind == StopRule::Kind::TotalSteps && stop.total_steps <= 0) {
        throw ConfigError("scheduler.stop.total_steps: must be > 0");
    }
}

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Report: return "report";
        case EventKind::Ready: return "ready";
        case EventKind::Continue: return "continue";
        case EventKind::ExploitLearn: return "exploit_learn";
        case EventKind::Resample: return "resample";
        case EventKind::Stop: return "stop";
    }
    return "?";
}

Scheduler::Scheduler(const SearchSpace& space, SchedulerConfig cfg,
                     std::vector<HyperVector> initial_hp,
                     std::uint64_t master_seed)
    : space_(space), cfg_(std::move(cfg)),
      population_(space, std::move(initial_hp)) {
    cfg_.validate();
    if (population_.size() != cfg_.population) {
        throw ConfigError("initial population size does not match config");
    }
    scheduler_streams_.reserve(cfg_.population);
    strategy_streams_.reserve(cfg_.population);
    for (AgentId a = 0; a < cfg_.population; ++a) {
        scheduler_streams_.push_back(
            derive_stream(master_seed, a, StreamPurpose::Scheduler));
        strategy_streams_.push_back(
            derive_stream(master_seed, a, StreamPurpose::Strategy));
    }
}

void Scheduler::append_event(EventKind kind, AgentId agent, std::int64_t step,
                             double elapsed_seconds,
                             std::optional<AgentId> source) {
    SchedulerEvent e;
    e.wall_order = next_event_order_++;
    e.elapsed_seconds = elapsed_seconds;
    e.agent = agent;
    e.kind = kind;
    e.step = step;
    e.score = population_.latest_score(agent).value_or(0.0);
    e.hp_natural = to_natural(space_, population_.agent(agent).hp);
    e.source = source;
    events_.push_back(std::move(e));
}

bool Scheduler::stop_rule_met() const {
    return is_finished(population_, cfg_);
}

UpdateDecision Scheduler::learn_from(AgentId slow, AgentId source,
                                     std::int64_t step,
                                     double elapsed_seconds) {
    const AgentState& from = population_.agent(source);
    const CheckpointRef inherit = from.checkpoint;
    const double inherited_score = population_.latest_score(source).value();

    UpdateOutcome outcome =
        apply_strategy(cfg_.strategy, population_.agent(slow).hp,
                       population_.agent(slow).vel, from.hp, space_,
                       strategy_streams_[slow]);

    AgentState& a = population_.agent(slow);
    a.hp = outcome.new_hp;
    a.vel = outcome.new_vel;
    a.generation += 1;
    a.last_update_step = step;
    a.checkpoint = inherit;
    // The inherited weights are the source's; so is their evaluation.
    population_.overwrite_latest_score(slow, inherited_score);

    ++updates_applied_;
    append_event(outcome.resampled ? EventKind::Resample
                                   : EventKind::ExploitLearn,
                 slow, step, elapsed_seconds, source);
    return UpdateAction{source, std::move(outcome), inherit};
}

UpdateDecision Scheduler::on_result(AgentId agent, std::int64_t step,
                                    double score,
                                    CheckpointRef fresh_checkpoint,
                                    double elapsed_seconds) {
    population_.record_result(agent, step, score);
    AgentState& a = population_.agent(agent);
    a.steps_trained = step;
    a.checkpoint = fresh_checkpoint;
    append_event(EventKind::Report, agent, step, elapsed_seconds, std::nullopt);

    UpdateDecision decision;
    const bool updates_enabled = cfg_.strategy.kind != StrategyKind::None;
    if (!updates_enabled || step - a.last_update_step < cfg_.delta) {
        append_event(EventKind::Continue, agent, step, elapsed_seconds,
                     std::nullopt);
    } else {
        append_event(EventKind::Ready, agent, step, elapsed_seconds,
                     std::nullopt);
        const bool warmed_up =
            std::all_of(population_.agents().begin(),
                        population_.agents().end(),
                        [](const AgentState& s) { return !s.history.empty(); });
        if (!warmed_up) {
            append_event(EventKind::Continue, agent, step, elapsed_seconds,
                         std::nullopt);
        } else if (cfg_.pairing == PairingMode::QuartileTopBottom) {
            const auto ranked = population_.rank_snapshot();
            const auto sets = quartile_membership(ranked, cfg_.quantile);
            const bool in_bottom =
                std::find(sets.bottom.begin(), sets.bottom.end(), agent) !=
                sets.bottom.end();
            if (!in_bottom) {
                append_event(EventKind::Continue, agent, step, elapsed_seconds,
                             std::nullopt);
            } else {
                const AgentId source =
                    sets.top[scheduler_streams_[agent].uniform_index(
                        sets.top.size())];
                decision = learn_from(agent, source, step, elapsed_seconds);
            }
        } else {
            const std::size_t n = population_.size();
            std::size_t pick = scheduler_streams_[agent].uniform_index(n - 1);
            const AgentId partner = pick >= agent ? pick + 1 : pick;
            const auto partner_score = population_.latest_score(partner);
            const auto own_score = population_.latest_score(agent);
            if (!partner_score || *partner_score <= *own_score) {
                // The agent is the fast learner of this pair; the partner is
                // never modified.
                append_event(EventKind::Continue, agent, step, elapsed_seconds,
                             std::nullopt);
            } else {
                decision = learn_from(agent, partner, step, elapsed_seconds);
            }
        }
    }

    if (!stop_emitted_ && stop_rule_met()) {
        stop_emitted_ = true;
        append_event(EventKind::Stop, agent, step, elapsed_seconds,
                     std::nullopt);
        finished_.store(true, std::memory_order_release);
    }
    return decision;
}

AgentId Scheduler::best_agent() const {
    return population_.rank_snapshot().front();
}

bool is_finished(const Population& population, const SchedulerConfig& cfg) {
    if (cfg.stop.kind == StopRule::Kind::TotalSteps) {
        return std::all_of(population.agents().begin(),
                           population.agents().end(),
                           [&](const AgentState& a) {
                               return a.steps_trained >= cfg.stop.total_steps;
                           });
    }
    return std::any_of(population.agents().begin(), population.agents().end(),
                       [&](const AgentState& a) {
                           return !a.history.empty() &&
                                  a.history.back().score >=
                                      cfg.stop.target_score;
                       });
}

std::string format_event_line(const SchedulerEvent& e) {
    char buf[64];
    std::string line;
    std::snprintf(buf, sizeof(buf), "%llu",
                  static_cast<unsigned long long>(e.wall_order));
    line += buf;
    std::snprintf(buf, sizeof(buf), ",%.6f", e.elapsed_seconds);
    line += buf;
    std::snprintf(buf, sizeof(buf), ",%llu",
                  static_cast<unsigned long long>(e.agent));
    line += buf;
    line += ',';
    line += event_kind_name(e.kind);
    std::snprintf(buf, sizeof(buf), ",%lld", static_cast<long long>(e.step));
    line += buf;
    std::snprintf(buf, sizeof(buf), ",%.17g", e.score);
    line += buf;
    for (double h : e.hp_natural) {
        std::snprintf(buf, sizeof(buf), ",%.17g", h);
        line += buf;
    }
    if (e.source) {
        std::snprintf(buf, sizeof(buf), ",%llu",
                      static_cast<unsigned long long>(*e.source));
        line += buf;
    } else {
        line += ",-";
    }
    return line;
}

}  // namespace gpbt
