#pragma once

#include <functional>

#include <Eigen/Dense>

namespace chreduct {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarMap = std::function<double(const Vector&)>;
using VectorMap = std::function<Vector(const Vector&)>;
using MatrixMap = std::function<Matrix(const Vector&)>;

/// Relative step used by every central-difference routine.
inline constexpr double kFiniteDifferenceStep = 1e-6;

/// Central-difference step at x: kFiniteDifferenceStep * max(1, |x|).
double difference_step(const Vector& x);

/// Central-difference gradient of a scalar map.
/// Throws GradientError when a component comes out non-finite.
Vector fd_gradient(const ScalarMap& f, const Vector& x);

/// Central-difference Jacobian, rows = outputs, cols = inputs.
Matrix fd_jacobian(const VectorMap& f, const Vector& x);

/// A scalar function with an optional analytic gradient.
/// Without one, gradients fall back to central differences.
struct ScalarFunction {
    ScalarMap value;
    VectorMap gradient;

    ScalarFunction() = default;
    ScalarFunction(ScalarMap v, VectorMap g = {}) : value(std::move(v)), gradient(std::move(g)) {}

    double operator()(const Vector& x) const { return value(x); }

    bool has_analytic_gradient() const { return static_cast<bool>(gradient); }

    /// Gradient at x; checked for finiteness.
    Vector grad(const Vector& x) const;
};

/// Throws GradientError unless every entry of v is finite.
void require_finite(const Vector& v, const char* what);

}  // namespace chreduct
