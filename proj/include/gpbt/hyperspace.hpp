#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gpbt/random.hpp"

namespace gpbt {

enum class DimKind { Continuous, Integer };
enum class DimScale { Linear, Log };

// One hyperparameter dimension, bounds in natural units. Logarithmic
// dimensions are stored internally as log10 of the natural value; integer
// dimensions are relaxed to reals internally and rounded only when handed
// to a trainable.
struct DimensionSpec {
    std::string name;
    DimKind kind = DimKind::Continuous;
    double lower = 0.0;
    double upper = 1.0;
    DimScale scale = DimScale::Linear;

    double internal_lower() const;
    double internal_upper() const;
};

class SearchSpace {
public:
    // Validates: at least one dimension, unique names, lower < upper,
    // log scale requires lower > 0, integer kind requires upper-lower >= 1.
    explicit SearchSpace(std::vector<DimensionSpec> dims);

    std::size_t size() const { return dims_.size(); }
    const DimensionSpec& dim(std::size_t i) const { return dims_[i]; }
    const std::vector<DimensionSpec>& dims() const { return dims_; }

private:
    std::vector<DimensionSpec> dims_;
};

// Hyperparameter vector in internal (transformed) coordinates. All strategy
// arithmetic happens in this space; the PBT x1.2/x0.8 of a natural value is
// an additive shift here for log dimensions.
struct HyperVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    friend bool operator==(const HyperVector&, const HyperVector&) = default;
};

// Per-dimension displacement in internal coordinates.
struct VelocityVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    friend bool operator==(const VelocityVector&, const VelocityVector&) = default;
};

VelocityVector zero_velocity(const SearchSpace& space);

// Natural -> internal. Throws std::domain_error naming the dimension when a
// value falls outside [lower, upper].
HyperVector to_internal(const SearchSpace& space,
                        const std::vector<double>& natural);

// Internal -> natural. Integer dims are rounded half-away-from-zero, and
// every component is clamped so rounding overshoot cannot escape the bounds.
std::vector<double> to_natural(const SearchSpace& space, const HyperVector& v);

// Uniform draw over each internal interval (log-uniform in natural units for
// log dimensions). One next_unit() per dimension, in dimension order.
HyperVector sample(const SearchSpace& space, RandomStream& rng);

// Latin-hypercube draw: each internal interval is split into n equal strata;
// per dimension a random permutation assigns one stratum to each vector.
// Draw order: for each dimension, a Fisher-Yates shuffle of the strata, then
// one offset draw per vector.
std::vector<HyperVector> sample_stratified(const SearchSpace& space,
                                           std::size_t n, RandomStream& rng);

// Componentwise projection onto the internal intervals. Idempotent. Throws
// std::domain_error on non-finite components.
HyperVector clamp(const SearchSpace& space, HyperVector v);

bool in_bounds(const SearchSpace& space, const HyperVector& v);

}  // namespace gpbt
