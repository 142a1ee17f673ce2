#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace gpbt {

// xoshiro256** generator. Chosen over <random> engines because trainable
// checkpoints serialize the generator state (4 words here) and because the
// standard distributions are implementation-defined, which would make
// frozen test values compiler-specific. All derived quantities below are
// produced from raw 64-bit draws only.
class RandomStream {
public:
    RandomStream() : RandomStream(0) {}
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer in [0, n), n >= 1. Multiply-shift reduction.
    std::size_t uniform_index(std::size_t n);

    // Standard normal via Box-Muller; consumes exactly two draws per call
    // so the stream position stays checkpoint-friendly.
    double gaussian();

    std::array<std::uint64_t, 4> state() const { return s_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { s_ = s; }

private:
    std::array<std::uint64_t, 4> s_;
};

enum class StreamPurpose : std::uint64_t {
    Trainable = 1,
    Strategy = 2,
    Scheduler = 3,
    Init = 4,
};

// Counter-based split of the master seed: each (agent, purpose) pair gets a
// stream whose contents do not depend on scheduling interleaving.
RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t agent,
                           StreamPurpose purpose);

}  // namespace gpbt
