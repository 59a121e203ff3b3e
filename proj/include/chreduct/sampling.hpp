#pragma once

#include <cstdint>
#include <vector>

#include "chreduct/numdiff.hpp"

namespace chreduct {

/// Halton sequence with a seeded Cranley-Patterson rotation.
/// Deterministic for a given (dim, seed); supports up to 32 dimensions.
class HaltonCloud {
public:
    HaltonCloud(int dim, std::uint64_t seed);

    /// Next point in [0,1)^dim.
    Vector next();

    int dim() const { return dim_; }

private:
    int dim_;
    std::uint64_t index_ = 1;
    Vector shift_;
};

/// n quasi-random points in the box [lower, upper].
std::vector<Vector> sample_box(const Vector& lower, const Vector& upper, int n, std::uint64_t seed);

}  // namespace chreduct
