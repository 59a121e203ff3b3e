#pragma once

// Regular controlled Hamiltonian systems (T*Q, omega, H, F, W) and the
// closed-loop field X_H + vlift(F) X_H + vlift(u) X_H.

#include <optional>
#include <string>

#include "chreduct/phasespace.hpp"
#include "chreduct/trajectory.hpp"

namespace chreduct {

/// Control subset W modeled as a vertical distribution: at each q the
/// allowed fiber directions are the columns of directions(q).
class ControlSubset {
public:
    using DirectionField = std::function<Matrix(const Vector&)>;

    ControlSubset(DirectionField directions, std::string description);

    /// Constant directions (columns of d).
    static ControlSubset fixed(const Matrix& d, std::string description = "fixed");
    /// Every fiber direction of T*R^n.
    static ControlSubset full(int n);
    /// W = {0}.
    static ControlSubset none(int n);

    const std::string& description() const { return description_; }

    /// Directions at q; throws ConfigError if they are linearly dependent.
    Matrix directions(const Vector& q) const;

    /// Least-squares distance of the fiber vector v from span(directions(q)).
    double distance(const Vector& q, const Vector& v) const;

private:
    DirectionField directions_;
    std::string description_;
};

struct RCHSystem;

/// Feedback law u: E -> W. Either a plain vertical field (the fiber increment
/// itself) or a fiber-preserving map whose effect is vlift(u) X_H.
class ControlLaw {
public:
    using Field = std::function<Vector(const PhasePoint&)>;

    enum class Kind { zero, vertical_field, fiber_map };

    static ControlLaw zero();
    static ControlLaw vertical(Field f);
    static ControlLaw from_fiber_map(FiberMap f);

    Kind kind() const { return kind_; }

    /// Fiber increment vlift(u) X_H at alpha for system sys. Throws
    /// ControlError if it leaves W by more than 1e-10.
    Vector increment(const RCHSystem& sys, const PhasePoint& alpha) const;

    /// The raw vertical field (vertical_field kind only).
    const Field& field() const { return field_; }
    const std::optional<FiberMap>& fiber_map() const { return map_; }

private:
    Kind kind_ = Kind::zero;
    Field field_;
    std::optional<FiberMap> map_;
};

struct RCHSystem {
    PhaseSpaceChart chart;
    ScalarFunction hamiltonian;
    /// Empty means the zero force: its vlift contribution is identically zero.
    std::optional<FiberMap> force;
    ControlSubset control_subset;

    RCHSystem(PhaseSpaceChart c, ScalarFunction h, std::optional<FiberMap> f, ControlSubset w);
};

/// Tolerance for the control-containment check.
inline constexpr double kControlTolerance = 1e-10;

/// vlift(F) X_H at alpha (zero for the zero-force sentinel).
TangentSample force_lift(const RCHSystem& sys, const PhasePoint& alpha);

/// X_H + vlift(F) X_H + vlift(u) X_H at alpha.
TangentSample dynamical_vf(const RCHSystem& sys, const ControlLaw& u, const PhasePoint& alpha);

/// RK4 flow of dynamical_vf with energy (H) and, when the chart carries an
/// action, momentum-map diagnostics.
Trajectory integrate(const RCHSystem& sys, const ControlLaw& u, const PhasePoint& z0, double t_end, double dt);

}  // namespace chreduct
