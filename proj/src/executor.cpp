#include "gpbt/executor.hpp"

#include <chrono>
#include <condition_variable>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "gpbt/errors.hpp"

namespace gpbt {

namespace {

using Clock = std::chrono::steady_clock;

struct RunState {
    RunState(const RunSpec& spec, std::vector<HyperVector> initial_hp)
        : scheduler(spec.space, spec.scheduler, std::move(initial_hp),
                    spec.master_seed) {
        if (spec.checkpoint_dir) {
            store.attach_directory(*spec.checkpoint_dir);
        }
        const std::size_t n = spec.scheduler.population;
        trainables.reserve(n);
        for (AgentId a = 0; a < n; ++a) {
            auto t = spec.make_trainable(a);
            t->reseed(derive_stream(spec.master_seed, a,
                                    StreamPurpose::Trainable));
            t->configure(
                to_natural(spec.space, scheduler.population().agent(a).hp));
            store.put(a, 0, t->save());
            trainables.push_back(std::move(t));
        }
    }

    Scheduler scheduler;
    CheckpointStore store;
    std::vector<std::unique_ptr<Trainable>> trainables;
};

RunArtifacts collect(const RunSpec& spec, const RunState& state,
                     double wall_seconds) {
    RunArtifacts out;
    const Population& pop = state.scheduler.population();
    out.series.reserve(pop.size());
    out.final_population.reserve(pop.size());
    for (const AgentState& a : pop.agents()) {
        out.series.push_back(a.history);
        AgentSnapshot snap;
        snap.id = a.id;
        snap.hp_natural = to_natural(spec.space, a.hp);
        snap.velocity = a.vel.values;
        snap.steps_trained = a.steps_trained;
        snap.generation = a.generation;
        snap.latest_score =
            a.history.empty() ? std::numeric_limits<double>::quiet_NaN()
                              : a.history.back().score;
        out.final_population.push_back(std::move(snap));
    }
    out.events = state.scheduler.events();
    out.updates_applied = state.scheduler.updates_applied();
    out.wall_seconds = wall_seconds;
    return out;
}

// One slice of one agent: train, checkpoint, report, apply any decision.
// Returns the agent's new cumulative step count.
std::int64_t run_slice(const RunSpec& spec, RunState& state, AgentId agent,
                       std::int64_t prior_steps, double elapsed_seconds,
                       std::mutex* scheduler_mu) {
    Trainable& t = *state.trainables[agent];
    const StepResult r = t.step(spec.report_granularity);
    const std::int64_t cum = prior_steps + r.steps_done;
    const CheckpointRef ref = state.store.put(agent, cum, t.save());

    UpdateDecision decision;
    if (scheduler_mu) {
        std::lock_guard lock(*scheduler_mu);
        decision =
            state.scheduler.on_result(agent, cum, r.score, ref, elapsed_seconds);
    } else {
        decision =
            state.scheduler.on_result(agent, cum, r.score, ref, elapsed_seconds);
    }
    if (decision) {
        t.restore(*state.store.get(decision->inherit_checkpoint));
        t.configure(to_natural(spec.space, decision->outcome.new_hp));
    }
    return cum;
}

RunArtifacts run_sequential(const RunSpec& spec, RunState& state) {
    const std::size_t n = spec.scheduler.population;
    const bool budget_mode =
        spec.scheduler.stop.kind == StopRule::Kind::TotalSteps;
    const std::int64_t budget = spec.scheduler.stop.total_steps;
    std::vector<std::int64_t> steps(n, 0);

    while (!state.scheduler.finished()) {
        bool progressed = false;
        for (AgentId a = 0; a < n && !state.scheduler.finished(); ++a) {
            if (budget_mode && steps[a] >= budget) {
                continue;
            }
            steps[a] = run_slice(spec, state, a, steps[a], 0.0, nullptr);
            progressed = true;
        }
        if (!progressed) {
            break;
        }
    }
    return collect(spec, state, 0.0);
}

struct Dispatcher {
    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::int64_t> steps;
    std::vector<bool> in_flight;
    bool finished = false;
};

RunArtifacts run_concurrent(const RunSpec& spec, RunState& state) {
    const std::size_t n = spec.scheduler.population;
    const bool budget_mode =
        spec.scheduler.stop.kind == StopRule::Kind::TotalSteps;
    const std::int64_t budget = spec.scheduler.stop.total_steps;
    const auto start = Clock::now();

    Dispatcher d;
    d.steps.assign(n, 0);
    d.in_flight.assign(n, false);
    std::mutex scheduler_mu;

    auto runnable = [&](AgentId a) {
        return !d.in_flight[a] && (!budget_mode || d.steps[a] < budget);
    };
    auto pick = [&]() -> std::optional<AgentId> {
        std::optional<AgentId> best;
        for (AgentId a = 0; a < n; ++a) {
            if (runnable(a) && (!best || d.steps[a] < d.steps[*best])) {
                best = a;
            }
        }
        return best;
    };

    auto worker = [&] {
        for (;;) {
            AgentId agent = 0;
            std::int64_t prior = 0;
            {
                std::unique_lock lock(d.mu);
                d.cv.wait(lock, [&] { return d.finished || pick().has_value(); });
                if (d.finished) {
                    return;
                }
                agent = *pick();
                prior = d.steps[agent];
                d.in_flight[agent] = true;
            }
            const double elapsed =
                std::chrono::duration<double>(Clock::now() - start).count();
            const std::int64_t cum =
                run_slice(spec, state, agent, prior, elapsed, &scheduler_mu);
            {
                std::lock_guard lock(d.mu);
                d.steps[agent] = cum;
                d.in_flight[agent] = false;
                if (state.scheduler.finished()) {
                    d.finished = true;
                }
                d.cv.notify_all();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(spec.mode.workers);
    for (unsigned i = 0; i < spec.mode.workers; ++i) {
        threads.emplace_back(worker);
    }
    for (auto& t : threads) {
        t.join();
    }
    const double wall =
        std::chrono::duration<double>(Clock::now() - start).count();
    return collect(spec, state, wall);
}

}  // namespace

void ExecMode::validate(std::size_t population) const {
    if (kind == Kind::Concurrent) {
        if (workers < 1) {
            throw ConfigError("exec.workers: must be >= 1");
        }
        if (workers > population) {
            std::cerr << "warning: exec.workers (" << workers
                      << ") exceeds the population size (" << population
                      << "); extra workers will idle\n";
        }
    }
}

RunArtifacts run(const RunSpec& spec) {
    spec.scheduler.validate();
    spec.mode.validate(spec.scheduler.population);
    if (spec.report_granularity <= 0) {
        throw ConfigError("report_granularity: must be > 0");
    }
    if (!spec.make_trainable) {
        throw ConfigError("run spec is missing a trainable factory");
    }

    RandomStream init_stream =
        derive_stream(spec.master_seed, 0, StreamPurpose::Init);
    std::vector<HyperVector> initial_hp =
        sample_stratified(spec.space, spec.scheduler.population, init_stream);

    RunState state(spec, std::move(initial_hp));
    if (spec.mode.kind == ExecMode::Kind::SequentialDeterministic) {
        return run_sequential(spec, state);
    }
    return run_concurrent(spec, state);
}

}  // namespace gpbt
