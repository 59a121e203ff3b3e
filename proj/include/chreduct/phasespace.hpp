#pragma once

// Globally trivialized cotangent bundles T*R^n = R^n x R^n with the canonical
// symplectic form, vertical lifts along fibers, and momentum maps of lifted
// actions.

#include <functional>
#include <optional>
#include <string>

#include "chreduct/liealg.hpp"
#include "chreduct/numdiff.hpp"

namespace chreduct {

/// Lifted actions with a registered momentum map.
enum class GroupAction {
    none,
    translation,  ///< R^n acting on R^n by translation
    rotation,     ///< SO(3) acting on R^3 by rotation
};

struct PhaseSpaceChart {
    int n = 1;
    std::string label;
    GroupAction action = GroupAction::none;

    PhaseSpaceChart(int config_dim, std::string name, GroupAction act = GroupAction::none);
};

/// (q, p) in T*R^n.
class PhasePoint {
public:
    PhasePoint(Vector q, Vector p);
    static PhasePoint from_flat(const Vector& z);

    const Vector& q() const { return q_; }
    const Vector& p() const { return p_; }
    int dim() const { return static_cast<int>(q_.size()); }
    /// Stacked (q, p), length 2n.
    Vector flat() const;

private:
    Vector q_;
    Vector p_;
};

/// Tangent vector (dq, dp) attached at a base point.
struct TangentSample {
    PhasePoint base;
    Vector dq;
    Vector dp;

    TangentSample(PhasePoint b, Vector dq_, Vector dp_);

    /// Vertical iff T(pi) of the vector is zero, i.e. dq == 0 exactly.
    bool is_vertical() const;
    Vector flat() const;
};

using PhaseVectorField = std::function<TangentSample(const PhasePoint&)>;

/// Fiber-preserving map E -> E. Jacobian is taken analytically when provided
/// (2n x 2n on the stacked coordinates), otherwise by central differences.
class FiberMap {
public:
    using Evaluator = std::function<PhasePoint(const PhasePoint&)>;

    explicit FiberMap(Evaluator f, MatrixMap jacobian = {});

    /// Evaluates and checks that the base point is unchanged (tol 1e-12).
    PhasePoint operator()(const PhasePoint& z) const;
    Matrix tangent_map(const PhasePoint& z) const;

    static FiberMap identity();
    /// (q, p) -> (q, 0).
    static FiberMap zero_section();
    /// (q, p) -> (q, p + c).
    static FiberMap translation(const Vector& c);
    /// (q, p) -> (q, K p + L q + c).
    static FiberMap affine(const Matrix& k, const Matrix& l, const Vector& c);

private:
    Evaluator f_;
    MatrixMap jac_;
};

/// Hamiltonian vector field of H (a function of the stacked (q, p)):
/// dq = dH/dp, dp = -dH/dq.
TangentSample canonical_xh(const ScalarFunction& hamiltonian, const PhasePoint& z);

/// Transports the vertical part of rho (attached at b) to the point a of the
/// same fiber. Straight-line transport leaves the vertical part unchanged.
/// Throws DomainError if a and b lie on different fibers.
TangentSample vlift_fiber(const TangentSample& rho, const PhasePoint& a);

/// How TF is combined with X in vlift(F)X.
enum class LiftReading {
    pushforward,        ///< TF applied to X(alpha); vector attached at F(alpha)
    evaluate_at_image,  ///< TF applied to X(F(alpha)); experimental
};

/// Vertical part of TF(X) transported back to alpha.
TangentSample vlift_of_map(const FiberMap& f, const PhaseVectorField& x, const PhasePoint& alpha,
                           LiftReading reading = LiftReading::pushforward);

/// Infinitesimal generator xi_Q(q) of the chart's action.
Vector infinitesimal_generator(GroupAction action, const Vector& xi, const Vector& q);

/// Algebra acting on the chart (R^n for translations, so(3) for rotations).
AlgebraPtr acting_algebra(const PhaseSpaceChart& chart);

/// J with <J(z), xi> = p . xi_Q(q), assembled over a basis of the algebra.
/// Throws DomainError when the chart has no registered action.
CoalgebraVector momentum_map(const PhaseSpaceChart& chart, const PhasePoint& z);

}  // namespace chreduct
