#pragma once

// Shipped reduced systems: free rigid body, heavy top, and both with
// internal rotors.
//
// Rotor convention (locked inertia): with rotor axes A (3 x k, orthonormal
// columns) and rotor inertias J,
//   I_lock = I + A diag(J) A^T,
//   h(Pi, l) = 1/2 (Pi - A l) . I_lock^{-1} (Pi - A l) + 1/2 l . J^{-1} l,
// so Omega = I_lock^{-1}(Pi - A l), theta' = J^{-1} l - A^T Omega and l' = u.
// Physical realizability of the inertia (triangle inequalities) is not enforced.

#include <Eigen/Dense>

#include "chreduct/reduction.hpp"

namespace chreduct {

struct RigidBodyParams {
    Eigen::Vector3d inertia{1.0, 2.0, 3.0};

    void validate() const;
};

struct HeavyTopParams {
    Eigen::Vector3d inertia{1.0, 2.0, 3.0};
    double mgl = 1.0;
    Eigen::Vector3d chi{0.0, 0.0, 1.0};

    void validate() const;
};

struct RotorParams {
    Vector inertias;  ///< k entries, all > 0, k <= 3
    Matrix axes;      ///< 3 x k, orthonormal columns

    /// k rotors on the first k principal axes.
    static RotorParams principal(const Vector& inertias);

    int count() const { return static_cast<int>(inertias.size()); }
    void validate() const;
};

/// I + A diag(J) A^T; throws ConfigError unless positive-definite.
Eigen::Matrix3d locked_inertia(const Eigen::Vector3d& inertia, const RotorParams& rotors);

ReducedSystem free_rigid_body(const RigidBodyParams& params);
ReducedSystem heavy_top(const HeavyTopParams& params);
ReducedSystem rigid_body_with_rotors(const RigidBodyParams& params, const RotorParams& rotors);
ReducedSystem heavy_top_with_rotors(const HeavyTopParams& params, const RotorParams& rotors);

/// Rotor torque law u (length k) as a reduced control law on the l-block.
ReducedControlLaw rotor_control(const ReducedSystem& rs, std::function<Vector(const ReducedState&)> torque);

// Hand-coded right-hand sides, written with cross products only. Used as
// independent oracles for the structure-constant machinery.

/// Pi' = Pi x Omega, Omega = I^{-1} Pi.
Eigen::Vector3d euler_rhs(const Eigen::Vector3d& inertia, const Eigen::Vector3d& pi);

/// Pi' = Pi x Omega + mgl Gamma x chi, Gamma' = Gamma x Omega; returns (Pi', Gamma').
Vector heavy_top_rhs(const HeavyTopParams& params, const Vector& pi_gamma);

/// Stacked (Pi', theta', l') for the rigid body with rotors and torque u.
Vector rotor_rhs(const RigidBodyParams& params, const RotorParams& rotors, const Vector& state, const Vector& u);

/// Stacked (Pi', Gamma', theta', l') for the heavy top with rotors and torque u.
Vector heavy_top_rotor_rhs(const HeavyTopParams& params, const RotorParams& rotors, const Vector& state,
                           const Vector& u);

}  // namespace chreduct
