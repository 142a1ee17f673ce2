#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "gpbt/random.hpp"
#include "gpbt/serialize.hpp"

namespace gpbt {

struct StepResult {
    std::int64_t steps_done = 0;
    double score = 0.0;  // finite, higher is better
};

// Inner-loop learner contract. Checkpoint blobs capture trainable state
// (weights, counters, stream position) but not hyperparameters, which are
// always supplied through configure. Restoring another agent's blob and
// stepping continues that agent's trajectory bit-exactly.
class Trainable {
public:
    virtual ~Trainable() = default;

    virtual void configure(const std::vector<double>& natural_hp) = 0;
    virtual StepResult step(std::int64_t budget) = 0;
    virtual Blob save() const = 0;
    virtual void restore(const Blob& blob) = 0;
    virtual void reseed(RandomStream stream) = 0;
};

// Gradient ascent on the surrogate q(theta | h) = 1.2 - h1*theta1^2 -
// h2*theta2^2 with fixed step size; the reported score is the true
// objective 1.2 - theta1^2 - theta2^2. The hyperparameters h in [0,1]^2
// steer how fast each coordinate decays.
class SurrogateQuadratic : public Trainable {
public:
    explicit SurrogateQuadratic(double eta0 = 0.01,
                                std::array<double, 2> theta0 = {1.0, 1.0});

    void configure(const std::vector<double>& natural_hp) override;
    StepResult step(std::int64_t budget) override;
    Blob save() const override;
    void restore(const Blob& blob) override;
    void reseed(RandomStream stream) override;

    std::array<double, 2> theta() const { return theta_; }
    double objective() const;

private:
    double eta0_;
    std::array<double, 2> theta_;
    std::array<double, 2> h_{0.0, 0.0};
};

// Score = -||x - c(t)||^2 + gaussian noise, with the target center drifting
// as c_j(t) = amplitude * sin(omega*t + j*phase_stride). Exercises ranking
// under noise while tracking a moving optimum.
class DriftingSphere : public Trainable {
public:
    DriftingSphere(std::size_t dims, double amplitude = 1.0,
                   double omega = 0.05, double phase_stride = 1.0,
                   double noise_sigma = -1.0);  // <0: 0.1 * dims * amplitude^2

    void configure(const std::vector<double>& natural_hp) override;
    StepResult step(std::int64_t budget) override;
    Blob save() const override;
    void restore(const Blob& blob) override;
    void reseed(RandomStream stream) override;

    std::int64_t time() const { return t_; }

private:
    std::size_t dims_;
    double amplitude_;
    double omega_;
    double phase_stride_;
    double noise_sigma_;
    std::int64_t t_ = 0;
    std::vector<double> x_;
    RandomStream rng_;
};

// Tabular Q-learning on a fixed 5x5 gridworld: start (0,0), terminal goal
// (4,4) worth +1, every move costs 0.01, episodes capped at 50 moves. One
// step unit is one episode. Hyperparameters, in order: learning rate alpha,
// exploration epsilon, discount gamma. The reported score is the mean of
// the last 10 completed episode returns.
class GridworldQ : public Trainable {
public:
    static constexpr int kSide = 5;
    static constexpr int kStates = kSide * kSide;
    static constexpr int kActions = 4;  // up, down, left, right
    static constexpr int kEpisodeCap = 50;
    static constexpr double kStepCost = -0.01;
    static constexpr double kGoalReward = 1.0;

    GridworldQ();

    void configure(const std::vector<double>& natural_hp) override;
    StepResult step(std::int64_t budget) override;
    Blob save() const override;
    void restore(const Blob& blob) override;
    void reseed(RandomStream stream) override;

    const std::array<double, kStates * kActions>& q_table() const {
        return q_;
    }
    static int transition(int state, int action);

private:
    double run_episode();
    int greedy_action(int state) const;

    double alpha_ = 0.1;
    double epsilon_ = 0.1;
    double gamma_ = 0.95;
    std::array<double, kStates * kActions> q_{};
    std::deque<double> recent_returns_;  // at most 10
    std::int64_t episodes_done_ = 0;
    RandomStream rng_;
};

}  // namespace gpbt
