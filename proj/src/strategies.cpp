#include "gpbt/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpbt {

namespace {

void check_dims(const SearchSpace& space, std::size_t got, const char* what) {
    if (got != space.size()) {
        throw std::domain_error(std::string(what) + " has " +
                                std::to_string(got) + " components, space has " +
                                std::to_string(space.size()));
    }
}

// Clamp one component and re-derive the displacement so that
// slow + vel == hp holds bit-exactly. Falls back to a zero move when
// cancellation pushes the re-added value out of bounds.
void settle_component(double slow, double raw_hp, double lo, double hi,
                      double& hp_out, double& vel_out) {
    const double clamped = std::clamp(raw_hp, lo, hi);
    vel_out = clamped - slow;
    hp_out = slow + vel_out;
    if (!(hp_out >= lo && hp_out <= hi)) {
        vel_out = 0.0;
        hp_out = slow;
    }
}

}  // namespace

UpdateOutcome pairwise_learning_step(const HyperVector& slow_hp,
                                     const VelocityVector& slow_vel,
                                     const HyperVector& fast_hp,
                                     const SearchSpace& space,
                                     std::span<const double> r1,
                                     std::span<const double> r2) {
    check_dims(space, slow_hp.size(), "slow hyperparameter vector");
    check_dims(space, slow_vel.size(), "slow velocity vector");
    check_dims(space, fast_hp.size(), "fast hyperparameter vector");
    check_dims(space, r1.size(), "r1");
    check_dims(space, r2.size(), "r2");

    UpdateOutcome out;
    out.new_hp.values.resize(space.size());
    out.new_vel.values.resize(space.size());
    out.resampled = false;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space.dim(i);
        const double raw_vel =
            r1[i] * slow_vel[i] + r2[i] * (fast_hp[i] - slow_hp[i]);
        settle_component(slow_hp[i], slow_hp[i] + raw_vel, d.internal_lower(),
                         d.internal_upper(), out.new_hp[i], out.new_vel[i]);
    }
    return out;
}

UpdateOutcome pairwise_learning_update(const HyperVector& slow_hp,
                                       const VelocityVector& slow_vel,
                                       const HyperVector& fast_hp,
                                       const SearchSpace& space,
                                       const StrategyConfig& cfg,
                                       RandomStream& rng) {
    const std::size_t d = space.size();
    check_dims(space, slow_hp.size(), "slow hyperparameter vector");

    if (!cfg.resample_per_dimension) {
        if (rng.next_unit() < cfg.resample_prob) {
            UpdateOutcome out;
            out.new_hp = sample(space, rng);
            out.new_vel = zero_velocity(space);
            out.resampled = true;
            return out;
        }
        std::vector<double> r1(d), r2(d);
        for (auto& r : r1) r = rng.next_unit();
        for (auto& r : r2) r = rng.next_unit();
        return pairwise_learning_step(slow_hp, slow_vel, fast_hp, space, r1, r2);
    }

    // Per-dimension variant: gate (and fresh value) per dimension, then the
    // learning step over all dimensions, resampled components overriding.
    std::vector<bool> resample(d, false);
    std::vector<double> fresh(d, 0.0);
    bool any = false;
    for (std::size_t i = 0; i < d; ++i) {
        if (rng.next_unit() < cfg.resample_prob) {
            const auto& dim = space.dim(i);
            resample[i] = true;
            fresh[i] = rng.uniform(dim.internal_lower(), dim.internal_upper());
            any = true;
        }
    }
    std::vector<double> r1(d), r2(d);
    for (auto& r : r1) r = rng.next_unit();
    for (auto& r : r2) r = rng.next_unit();
    UpdateOutcome out =
        pairwise_learning_step(slow_hp, slow_vel, fast_hp, space, r1, r2);
    if (any) {
        for (std::size_t i = 0; i < d; ++i) {
            if (resample[i]) {
                out.new_hp[i] = fresh[i];
            }
            out.new_vel[i] = 0.0;  // restart: no momentum continuation
        }
        out.resampled = true;
    }
    return out;
}

UpdateOutcome perturb_update(const HyperVector& current,
                             const SearchSpace& space,
                             const StrategyConfig& cfg, RandomStream& rng) {
    check_dims(space, current.size(), "hyperparameter vector");

    UpdateOutcome out;
    out.new_hp.values.resize(space.size());
    out.new_vel = zero_velocity(space);
    out.resampled = false;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space.dim(i);
        const double lo = d.internal_lower();
        const double hi = d.internal_upper();
        if (rng.next_unit() < cfg.resample_prob) {
            out.new_hp[i] = rng.uniform(lo, hi);
            out.resampled = true;
            continue;
        }
        const double factor =
            rng.uniform_index(2) == 0 ? cfg.perturb_shrink : cfg.perturb_grow;
        double v = current[i];
        if (d.scale == DimScale::Log) {
            v += std::log10(factor);  // x*factor in natural units
        } else {
            v *= factor;
        }
        out.new_hp[i] = std::clamp(v, lo, hi);
    }
    return out;
}

UpdateOutcome null_update(const HyperVector& current,
                          const VelocityVector& vel) {
    return UpdateOutcome{current, vel, false};
}

UpdateOutcome apply_strategy(const StrategyConfig& cfg,
                             const HyperVector& slow_hp,
                             const VelocityVector& slow_vel,
                             const HyperVector& fast_hp,
                             const SearchSpace& space, RandomStream& rng) {
    switch (cfg.kind) {
        case StrategyKind::PairwiseLearning:
            return pairwise_learning_update(slow_hp, slow_vel, fast_hp, space,
                                            cfg, rng);
        case StrategyKind::Perturb:
            // Exploit copies the source's hyperparameters; explore perturbs
            // the copy.
            return perturb_update(fast_hp, space, cfg, rng);
        case StrategyKind::None:
            return null_update(slow_hp, slow_vel);
    }
    throw std::logic_error("unreachable strategy kind");
}

}  // namespace gpbt
