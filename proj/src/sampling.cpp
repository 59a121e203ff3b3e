#include "chreduct/sampling.hpp"

#include <array>
#include <cmath>
#include <random>

#include "chreduct/errors.hpp"

namespace chreduct {

namespace {

constexpr std::array<int, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                         37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                         83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

}  // namespace

HaltonCloud::HaltonCloud(int dim, std::uint64_t seed) : dim_(dim), shift_(dim) {
    if (dim < 1 || dim > static_cast<int>(kPrimes.size())) {
        throw DimensionError("HaltonCloud: dimension must be in [1, 32]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int d = 0; d < dim; ++d) {
        shift_[d] = unit(rng);
    }
}

Vector HaltonCloud::next() {
    Vector x(dim_);
    for (int d = 0; d < dim_; ++d) {
        const double v = radical_inverse(index_, kPrimes[static_cast<std::size_t>(d)]) + shift_[d];
        x[d] = v - std::floor(v);
    }
    ++index_;
    return x;
}

std::vector<Vector> sample_box(const Vector& lower, const Vector& upper, int n, std::uint64_t seed) {
    if (lower.size() != upper.size()) {
        throw DimensionError("sample_box: bound lengths differ");
    }
    HaltonCloud cloud(static_cast<int>(lower.size()), seed);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(lower + (upper - lower).cwiseProduct(cloud.next()));
    }
    return out;
}

}  // namespace chreduct
