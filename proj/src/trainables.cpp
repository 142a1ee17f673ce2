#include "gpbt/trainables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gpbt/errors.hpp"

namespace gpbt {

namespace {

constexpr std::uint32_t kMagic = 0x4b435047;  // "GPCK"
constexpr std::uint16_t kVersion = 1;

enum : std::uint16_t {
    kKindSurrogateQuadratic = 1,
    kKindDriftingSphere = 2,
    kKindGridworldQ = 3,
};

void write_header(BlobWriter& w, std::uint16_t kind) {
    w.put_u32(kMagic);
    w.put_u16(kVersion);
    w.put_u16(kind);
}

void read_header(BlobReader& r, std::uint16_t kind) {
    if (r.get_u32() != kMagic) {
        throw SerializationError("checkpoint blob: bad magic tag");
    }
    if (const auto v = r.get_u16(); v != kVersion) {
        throw SerializationError("checkpoint blob: unsupported version " +
                                 std::to_string(v));
    }
    if (const auto k = r.get_u16(); k != kind) {
        throw SerializationError("checkpoint blob: trainable kind mismatch (" +
                                 std::to_string(k) + ")");
    }
}

void write_rng(BlobWriter& w, const RandomStream& rng) {
    for (auto word : rng.state()) {
        w.put_u64(word);
    }
}

RandomStream read_rng(BlobReader& r) {
    std::array<std::uint64_t, 4> s;
    for (auto& word : s) {
        word = r.get_u64();
    }
    RandomStream rng;
    rng.set_state(s);
    return rng;
}

}  // namespace

// ---------------------------------------------------------------- surrogate

SurrogateQuadratic::SurrogateQuadratic(double eta0, std::array<double, 2> theta0)
    : eta0_(eta0), theta_(theta0) {}

void SurrogateQuadratic::configure(const std::vector<double>& natural_hp) {
    if (natural_hp.size() != 2) {
        throw std::domain_error("surrogate_quadratic expects 2 hyperparameters");
    }
    for (double h : natural_hp) {
        if (!(h >= 0.0 && h <= 1.0)) {
            throw std::domain_error(
                "surrogate_quadratic hyperparameters must lie in [0, 1]");
        }
    }
    h_ = {natural_hp[0], natural_hp[1]};
}

double SurrogateQuadratic::objective() const {
    return 1.2 - theta_[0] * theta_[0] - theta_[1] * theta_[1];
}

StepResult SurrogateQuadratic::step(std::int64_t budget) {
    for (std::int64_t i = 0; i < budget; ++i) {
        theta_[0] -= 2.0 * eta0_ * h_[0] * theta_[0];
        theta_[1] -= 2.0 * eta0_ * h_[1] * theta_[1];
    }
    return StepResult{budget, objective()};
}

Blob SurrogateQuadratic::save() const {
    BlobWriter w;
    write_header(w, kKindSurrogateQuadratic);
    w.put_f64(theta_[0]);
    w.put_f64(theta_[1]);
    return w.take();
}

void SurrogateQuadratic::restore(const Blob& blob) {
    BlobReader r(blob);
    read_header(r, kKindSurrogateQuadratic);
    theta_[0] = r.get_f64();
    theta_[1] = r.get_f64();
    r.expect_end();
}

void SurrogateQuadratic::reseed(RandomStream) {
    // Deterministic dynamics; nothing to seed.
}

// ----------------------------------------------------------- drifting sphere

DriftingSphere::DriftingSphere(std::size_t dims, double amplitude, double omega,
                               double phase_stride, double noise_sigma)
    : dims_(dims), amplitude_(amplitude), omega_(omega),
      phase_stride_(phase_stride),
      noise_sigma_(noise_sigma >= 0.0
                       ? noise_sigma
                       : 0.1 * static_cast<double>(dims) * amplitude * amplitude),
      x_(dims, 0.0) {
    if (dims == 0) {
        throw std::domain_error("drifting_sphere needs at least one dimension");
    }
}

void DriftingSphere::configure(const std::vector<double>& natural_hp) {
    if (natural_hp.size() != dims_) {
        throw std::domain_error("drifting_sphere expects " +
                                std::to_string(dims_) + " hyperparameters");
    }
    x_ = natural_hp;
}

StepResult DriftingSphere::step(std::int64_t budget) {
    t_ += budget;
    double sq = 0.0;
    for (std::size_t j = 0; j < dims_; ++j) {
        const double c = amplitude_ *
                         std::sin(omega_ * static_cast<double>(t_) +
                                  phase_stride_ * static_cast<double>(j));
        const double delta = x_[j] - c;
        sq += delta * delta;
    }
    const double score = -sq + noise_sigma_ * rng_.gaussian();
    return StepResult{budget, score};
}

Blob DriftingSphere::save() const {
    BlobWriter w;
    write_header(w, kKindDriftingSphere);
    w.put_i64(t_);
    write_rng(w, rng_);
    return w.take();
}

void DriftingSphere::restore(const Blob& blob) {
    BlobReader r(blob);
    read_header(r, kKindDriftingSphere);
    t_ = r.get_i64();
    rng_ = read_rng(r);
    r.expect_end();
}

void DriftingSphere::reseed(RandomStream stream) {
    rng_ = stream;
}

// -------------------------------------------------------------- gridworld Q

GridworldQ::GridworldQ() { q_.fill(0.0); }

void GridworldQ::configure(const std::vector<double>& natural_hp) {
    if (natural_hp.size() != 3) {
        throw std::domain_error(
            "gridworld_q expects 3 hyperparameters: alpha, epsilon, gamma");
    }
    alpha_ = natural_hp[0];
    epsilon_ = natural_hp[1];
    gamma_ = natural_hp[2];
}

int GridworldQ::transition(int state, int action) {
    int row = state / kSide;
    int col = state % kSide;
    switch (action) {
        case 0: row = std::max(row - 1, 0); break;
        case 1: row = std::min(row + 1, kSide - 1); break;
        case 2: col = std::max(col - 1, 0); break;
        case 3: col = std::min(col + 1, kSide - 1); break;
        default: throw std::domain_error("bad action");
    }
    return row * kSide + col;
}

int GridworldQ::greedy_action(int state) const {
    int best = 0;
    double best_q = q_[static_cast<std::size_t>(state * kActions)];
    for (int a = 1; a < kActions; ++a) {
        const double qa = q_[static_cast<std::size_t>(state * kActions + a)];
        if (qa > best_q) {
            best_q = qa;
            best = a;
        }
    }
    return best;
}

double GridworldQ::run_episode() {
    constexpr int kGoal = kStates - 1;
    int state = 0;
    double episode_return = 0.0;
    for (int move = 0; move < kEpisodeCap; ++move) {
        const int action = rng_.next_unit() < epsilon_
                               ? static_cast<int>(rng_.uniform_index(kActions))
                               : greedy_action(state);
        const int next = transition(state, action);
        const bool done = next == kGoal;
        const double reward = kStepCost + (done ? kGoalReward : 0.0);
        episode_return += reward;

        const std::size_t idx =
            static_cast<std::size_t>(state * kActions + action);
        const double target =
            done ? reward
                 : reward + gamma_ * q_[static_cast<std::size_t>(
                                        next * kActions + greedy_action(next))];
        q_[idx] += alpha_ * (target - q_[idx]);

        if (done) {
            break;
        }
        state = next;
    }
    return episode_return;
}

StepResult GridworldQ::step(std::int64_t budget) {
    for (std::int64_t i = 0; i < budget; ++i) {
        const double ret = run_episode();
        recent_returns_.push_back(ret);
        if (recent_returns_.size() > 10) {
            recent_returns_.pop_front();
        }
        ++episodes_done_;
    }
    const double mean =
        recent_returns_.empty()
            ? 0.0
            : std::accumulate(recent_returns_.begin(), recent_returns_.end(),
                              0.0) /
                  static_cast<double>(recent_returns_.size());
    return StepResult{budget, mean};
}

Blob GridworldQ::save() const {
    BlobWriter w;
    write_header(w, kKindGridworldQ);
    for (double q : q_) {
        w.put_f64(q);
    }
    w.put_u32(static_cast<std::uint32_t>(recent_returns_.size()));
    for (double r : recent_returns_) {
        w.put_f64(r);
    }
    w.put_i64(episodes_done_);
    write_rng(w, rng_);
    return w.take();
}

void GridworldQ::restore(const Blob& blob) {
    BlobReader r(blob);
    read_header(r, kKindGridworldQ);
    for (double& q : q_) {
        q = r.get_f64();
    }
    const std::uint32_t count = r.get_u32();
    if (count > 10) {
        throw SerializationError("gridworld blob: oversized return window");
    }
    recent_returns_.clear();
    for (std::uint32_t i = 0; i < count; ++i) {
        recent_returns_.push_back(r.get_f64());
    }
    episodes_done_ = r.get_i64();
    rng_ = read_rng(r);
    r.expect_end();
}

void GridworldQ::reseed(RandomStream stream) {
    rng_ = stream;
}

}  // namespace gpbt
