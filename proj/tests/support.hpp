#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "chreduct/numdiff.hpp"

namespace testing_support {

inline chreduct::Vector randn(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    chreduct::Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = d(rng);
    }
    return v;
}

inline Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
    Eigen::Matrix3d m;
    m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
    return m;
}

inline Eigen::Vector3d vee(const Eigen::Matrix3d& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

}  // namespace testing_support
