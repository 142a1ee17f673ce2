#include "gpbt/hyperspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "gpbt/errors.hpp"

namespace gpbt {

double DimensionSpec::internal_lower() const {
    return scale == DimScale::Log ? std::log10(lower) : lower;
}

double DimensionSpec::internal_upper() const {
    return scale == DimScale::Log ? std::log10(upper) : upper;
}

SearchSpace::SearchSpace(std::vector<DimensionSpec> dims)
    : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ConfigError("search space needs at least one dimension");
    }
    std::unordered_set<std::string> names;
    for (const auto& d : dims_) {
        if (d.name.empty()) {
            throw ConfigError("dimension name must be non-empty");
        }
        if (!names.insert(d.name).second) {
            throw ConfigError("duplicate dimension name '" + d.name + "'");
        }
        if (!(d.lower < d.upper)) {
            throw ConfigError("dimension '" + d.name +
                              "': lower must be < upper");
        }
        if (d.scale == DimScale::Log && !(d.lower > 0.0)) {
            throw ConfigError("dimension '" + d.name +
                              "': log scale requires lower > 0");
        }
        if (d.kind == DimKind::Integer && !(d.upper - d.lower >= 1.0)) {
            throw ConfigError("dimension '" + d.name +
                              "': integer kind requires upper - lower >= 1");
        }
        if (!std::isfinite(d.lower) || !std::isfinite(d.upper)) {
            throw ConfigError("dimension '" + d.name + "': bounds not finite");
        }
    }
}

VelocityVector zero_velocity(const SearchSpace& space) {
    return VelocityVector{std::vector<double>(space.size(), 0.0)};
}

HyperVector to_internal(const SearchSpace& space,
                        const std::vector<double>& natural) {
    if (natural.size() != space.size()) {
        throw std::domain_error("natural vector has " +
                                std::to_string(natural.size()) +
                                " components, space has " +
                                std::to_string(space.size()));
    }
    HyperVector out;
    out.values.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space.dim(i);
        const double v = natural[i];
        if (!(v >= d.lower && v <= d.upper)) {
            throw std::domain_error("value " + std::to_string(v) +
                                    " out of bounds for dimension '" + d.name +
                                    "'");
        }
        out.values.push_back(d.scale == DimScale::Log ? std::log10(v) : v);
    }
    return out;
}

std::vector<double> to_natural(const SearchSpace& space, const HyperVector& v) {
    if (v.size() != space.size()) {
        throw std::domain_error("vector/space dimension mismatch");
    }
    std::vector<double> out;
    out.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space.dim(i);
        double x = d.scale == DimScale::Log ? std::pow(10.0, v[i]) : v[i];
        if (d.kind == DimKind::Integer) {
            // Half-away-from-zero, exactly llround's rule.
            x = static_cast<double>(std::llround(x));
        }
        out.push_back(std::clamp(x, d.lower, d.upper));
    }
    return out;
}

HyperVector sample(const SearchSpace& space, RandomStream& rng) {
    HyperVector out;
    out.values.reserve(space.size());
    for (const auto& d : space.dims()) {
        out.values.push_back(rng.uniform(d.internal_lower(), d.internal_upper()));
    }
    return out;
}

std::vector<HyperVector> sample_stratified(const SearchSpace& space,
                                           std::size_t n, RandomStream& rng) {
    if (n == 0) {
        throw std::domain_error("sample_stratified requires n >= 1");
    }
    std::vector<HyperVector> out(n, HyperVector{std::vector<double>(space.size())});
    std::vector<std::size_t> strata(n);
    for (std::size_t j = 0; j < space.size(); ++j) {
        const auto& d = space.dim(j);
        const double lo = d.internal_lower();
        const double width = (d.internal_upper() - lo) / static_cast<double>(n);
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(strata[i], strata[rng.uniform_index(i + 1)]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            out[i].values[j] =
                lo + (static_cast<double>(strata[i]) + rng.next_unit()) * width;
        }
    }
    return out;
}

HyperVector clamp(const SearchSpace& space, HyperVector v) {
    if (v.size() != space.size()) {
        throw std::domain_error("vector/space dimension mismatch");
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space.dim(i);
        if (!std::isfinite(v[i])) {
            throw std::domain_error("non-finite component for dimension '" +
                                    d.name + "'");
        }
        v[i] = std::clamp(v[i], d.internal_lower(), d.internal_upper());
    }
    return v;
}

bool in_bounds(const SearchSpace& space, const HyperVector& v) {
    if (v.size() != space.size()) {
        return false;
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& d = space.dim(i);
        if (!(v[i] >= d.internal_lower() && v[i] <= d.internal_upper())) {
            return false;
        }
    }
    return true;
}

}  // namespace gpbt
