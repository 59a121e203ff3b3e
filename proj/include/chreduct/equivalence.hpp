#pragma once

// RCH-equivalence of two controlled Hamiltonian systems related by a
// configuration diffeomorphism phi: Q1 -> Q2, checked pointwise on samples,
// and synthesis of the matching feedback law.

#include <optional>
#include <vector>

#include "chreduct/rch.hpp"
#include "chreduct/report.hpp"

namespace chreduct {

/// Diffeomorphism phi: Q1 -> Q2 with inverse and optional analytic Jacobian Dphi(q1).
struct ConfigDiffeo {
    VectorMap forward;
    VectorMap inverse;
    MatrixMap jacobian;

    Matrix jacobian_at(const Vector& q1) const;
    /// max |forward(inverse(q2)) - q2| over samples.
    double roundtrip_residual(const std::vector<Vector>& q2s) const;

    static ConfigDiffeo identity();
    /// q -> A q (A invertible).
    static ConfigDiffeo linear(const Matrix& a);
    /// q -> s q.
    static ConfigDiffeo scaling(double s);
};

/// phi* = T*phi: (q2, p2) -> (phi^{-1}(q2), Dphi(q1)^T p2). Throws DomainError
/// when Dphi is singular.
PhasePoint cotangent_lift(const ConfigDiffeo& phi, const PhasePoint& z2);
/// phi_* = (phi^{-1})*: (q1, p1) -> (phi(q1), Dphi(q1)^{-T} p1).
PhasePoint cotangent_push(const ConfigDiffeo& phi, const PhasePoint& z1);
/// T(phi*) at z2 as a 2n x 2n matrix on stacked coordinates.
Matrix cotangent_lift_tangent(const ConfigDiffeo& phi, const PhasePoint& z2);
/// max |M^T J M - J| with M = T(phi*) at z2 and J the canonical structure matrix.
double symplectic_residual(const ConfigDiffeo& phi, const PhasePoint& z2);

struct EquivalenceReport {
    double rch1_symplectic_residual = 0.0;
    double control_subset_residual = 0.0;
    double horizontal_residual = 0.0;
    double vertical_excess = 0.0;
    std::optional<double> closed_loop_residual;
    int n_samples = 0;
    bool pass = true;

    OrderedJson to_json() const;
};

inline constexpr double kSymplecticTolerance = 1e-8;
inline constexpr double kMatchingTolerance = 1e-6;
inline constexpr double kVerticalityTolerance = 1e-8;
inline constexpr double kClosedLoopTolerance = 1e-6;

/// Controlled matching conditions at samples alpha1 in T*Q1:
///   m = X_H1 + vlift(F1) X_H1 - T(phi*) X_H2(phi_* alpha1) - vlift(phi* F2 phi_*) X_H1
/// horizontal part of m must vanish, its vertical part must lie in span(W1),
/// phi* must be symplectic and W1 = phi*(W2).
EquivalenceReport matching_residual(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                                    const std::vector<PhasePoint>& samples);

/// Fiber increment vlift(u1)(alpha1) solving
///   vlift(u1) = -X_H1 - vlift(F1) + T(phi*) X_H2 + vlift(phi* u2 phi_*) + vlift(phi* F2 phi_*).
/// Throws MatchingViolation if the right-hand side is not vertical (1e-8).
Vector solve_control(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi, const ControlLaw& u2,
                     const PhasePoint& alpha1);

/// u1 as a vertical-field control law calling solve_control pointwise.
ControlLaw synthesize_control(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                              const ControlLaw& u2);

/// max over z2 of |X_(sys1,u1)(phi* z2) - T(phi*) X_(sys2,u2)(z2)|.
ResidualReport closed_loop_check(const RCHSystem& sys1, const ControlLaw& u1, const RCHSystem& sys2,
                                 const ControlLaw& u2, const ConfigDiffeo& phi, const std::vector<PhasePoint>& z2s,
                                 double tolerance = kClosedLoopTolerance);

/// Matching, then (if it passes) synthesis and the closed-loop check on
/// phi_* of the same samples.
EquivalenceReport verify_equivalence(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                                     const ControlLaw& u2, const std::vector<PhasePoint>& samples);

/// phi* maps samples of J2^{-1}(mu2) into J1^{-1}(mu1): max |J1(phi* z2) - mu1|.
/// Only the implemented actions are covered; full equivariance is not certified.
ResidualReport check_level_preservation(const ConfigDiffeo& phi, const PhaseSpaceChart& chart1, const Vector& mu1,
                                        const std::vector<PhasePoint>& z2s, double tolerance = 1e-8);

}  // namespace chreduct
