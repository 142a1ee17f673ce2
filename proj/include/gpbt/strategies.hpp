#pragma once

#include <span>

#include "gpbt/hyperspace.hpp"
#include "gpbt/random.hpp"

namespace gpbt {

enum class StrategyKind { PairwiseLearning, Perturb, None };

struct StrategyConfig {
    StrategyKind kind = StrategyKind::PairwiseLearning;
    double resample_prob = 0.25;
    // Natural-space perturbation factors; on log dimensions these become
    // additive log10 shifts.
    double perturb_shrink = 0.8;
    double perturb_grow = 1.2;
    // Pairwise learning resamples the whole vector by default; set this to
    // resample per dimension instead (the perturb strategy is always
    // per-dimension).
    bool resample_per_dimension = false;
};

struct UpdateOutcome {
    HyperVector new_hp;      // always in-bounds
    VelocityVector new_vel;  // new_hp == slow_hp + new_vel, bit-exact
    bool resampled = false;  // implies new_vel == 0
};

// Deterministic pairwise-learning step with caller-supplied random vectors,
// each component in [0, 1]:
//   raw_vel = r1 * vel + r2 * (fast_hp - slow_hp)   (componentwise)
//   new_hp  = clamp(slow_hp + raw_vel)
//   new_vel = new_hp - slow_hp   (effective displacement after clamping)
// new_hp is then recomputed as slow_hp + new_vel so the update identity
// holds bit-exactly. If re-adding lands outside the bounds (possible only
// under extreme cancellation), the component keeps its old value with zero
// velocity.
UpdateOutcome pairwise_learning_step(const HyperVector& slow_hp,
                                     const VelocityVector& slow_vel,
                                     const HyperVector& fast_hp,
                                     const SearchSpace& space,
                                     std::span<const double> r1,
                                     std::span<const double> r2);

// Full pairwise-learning update. Draw order: one unit draw for the resample
// gate (skipped when resample_per_dimension), then either a full resample
// (one draw per dimension) or r1 followed by r2 (one draw per dimension
// each). Per-dimension resampling draws gate+value per dimension first and
// applies the learning step to the surviving components.
UpdateOutcome pairwise_learning_update(const HyperVector& slow_hp,
                                       const VelocityVector& slow_vel,
                                       const HyperVector& fast_hp,
                                       const SearchSpace& space,
                                       const StrategyConfig& cfg,
                                       RandomStream& rng);

// PBT-style explore: per dimension, resample with probability resample_prob,
// otherwise multiply the natural value by shrink or grow (uniform choice).
// Draw order per dimension: gate, then value or factor choice. Velocity is
// reset to zero.
UpdateOutcome perturb_update(const HyperVector& current,
                             const SearchSpace& space,
                             const StrategyConfig& cfg, RandomStream& rng);

// Identity update used by the random-search baseline.
UpdateOutcome null_update(const HyperVector& current,
                          const VelocityVector& vel);

// Dispatch on cfg.kind. Perturb applies to the fast learner's vector (PBT
// exploit copies hyperparameters before exploring); pairwise learning moves
// the slow learner's own vector.
UpdateOutcome apply_strategy(const StrategyConfig& cfg,
                             const HyperVector& slow_hp,
                             const VelocityVector& slow_vel,
                             const HyperVector& fast_hp,
                             const SearchSpace& space, RandomStream& rng);

}  // namespace gpbt
