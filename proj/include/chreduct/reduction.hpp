#pragma once

// Reduced controlled Hamiltonian systems on g* x V x V* (the Poisson manifold
// whose symplectic leaves are O_mu x T*V), and numerical witnesses of
// point/orbit reduction.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chreduct/liealg.hpp"
#include "chreduct/rch.hpp"
#include "chreduct/report.hpp"
#include "chreduct/trajectory.hpp"

namespace chreduct {

/// Point (mu, theta, l) of g* x V x V*.
struct ReducedState {
    Vector mu;
    Vector theta;
    Vector l;

    Vector flat() const;
};

/// Tangent (dmu, dtheta, dl) at a reduced state.
struct ReducedTangent {
    Vector dmu;
    Vector dtheta;
    Vector dl;

    Vector flat() const;
};

/// Vertical increment on the momentum block, stacked (mu-part, l-part).
using ReducedIncrement = std::function<Vector(const ReducedState&)>;

struct ReducedSystem {
    std::string name;
    AlgebraPtr algebra;
    int rotor_dim = 0;
    /// h on the stacked state (mu, theta, l).
    ScalarFunction hamiltonian;
    /// Reduced force f on the momentum block; empty means zero force.
    ReducedIncrement force;
    /// Allowed directions on the stacked momentum block (mu, l).
    ControlSubset control_subset;
    std::optional<Vector> orbit_level;

    ReducedSystem(std::string name, AlgebraPtr g, int k, ScalarFunction h, ReducedIncrement f, ControlSubset w);

    int state_dim() const { return algebra->dim() + 2 * rotor_dim; }
    int momentum_dim() const { return algebra->dim() + rotor_dim; }

    ReducedState unflatten(const Vector& x) const;
    /// Throws DimensionError / DomainError if s does not fit this system.
    void validate(const ReducedState& s) const;
};

/// Reduced feedback law on the momentum block; empty means u = 0.
struct ReducedControlLaw {
    ReducedIncrement field;
};

/// X_h + vlift(f) + vlift(u):
///   dmu = ad*_{dh/dmu} mu + (f + u)_mu,  dtheta = dh/dl,  dl = -dh/dtheta + (f + u)_l.
/// Control values are checked against the system's control subset.
ReducedTangent reduced_vf(const ReducedSystem& rs, const ReducedControlLaw& u, const ReducedState& s);

/// RK4 flow with energy h and the algebra's Casimirs (of mu) as diagnostics.
Trajectory integrate_reduced(const ReducedSystem& rs, const ReducedControlLaw& u, const ReducedState& s0,
                             double t_end, double dt);

/// Projection pi from a full chart onto the reduced space, with an optional
/// analytic Jacobian ((d + 2k) x 2n on stacked coordinates).
struct ProjectionMap {
    std::function<ReducedState(const PhasePoint&)> evaluator;
    MatrixMap jacobian;

    Matrix tangent_map(const PhasePoint& z) const;
};

/// The level set J^{-1}(mu) that samples must lie on.
struct LevelSet {
    std::function<Vector(const PhasePoint&)> momentum;
    Vector mu;
};

inline constexpr double kRelatedTolerance = 1e-6;
inline constexpr double kLevelSetTolerance = 1e-8;
inline constexpr double kOrbitDriftTolerance = 1e-7;

/// max/mean over samples of |T(pi) X_full(z) - X_red(pi(z))|. Samples off the
/// level set (J-residual > 1e-8) are rejected with a DomainError.
ResidualReport check_point_related(const RCHSystem& full, const ControlLaw& full_u, const ReducedSystem& rs,
                                   const ReducedControlLaw& red_u, const ProjectionMap& proj,
                                   const std::vector<PhasePoint>& samples, const std::optional<LevelSet>& level,
                                   double tolerance = kRelatedTolerance);

/// Copy of rs with h + eps * mu_axis^4 added. Used as a negative control: a
/// Casimir perturbation such as eps |mu|^4 would leave the flow unchanged.
ReducedSystem with_quartic_perturbation(const ReducedSystem& rs, double eps, int axis = 0);

/// Largest Casimir drift of mu(t) along a reduced trajectory.
ResidualReport check_orbit_invariance(const ReducedSystem& rs, const Trajectory& traj,
                                      double tolerance = kOrbitDriftTolerance);

/// Checks i_{X_h} omega_O = dh on orbit tangents ad*_eta mu. X_h is written
/// as ad*_xi mu by least squares; omega_O(ad*_xi mu, ad*_eta mu) = -<mu,[xi,eta]>
/// is the orbit form matching the body sign convention. Throws DomainError for mu = 0.
ResidualReport kks_consistency(const AlgebraPtr& g, const ScalarFunction& h, const CoalgebraVector& mu,
                               const std::vector<Vector>& etas, double tolerance = 1e-10);

/// Full-side model for an so(3)-based reduced system: the canonical chart of
/// T*(SO(3) x V) in ZXZ Euler angles (phi, vartheta, psi, rotor angles) with
/// H = h o pi, where pi(q, p) = (B(q)^{-T} p_angles, rotor angles, p_rotors)
/// is the body-momentum projection. Valid away from vartheta in {0, pi}.
struct EulerChartModel {
    RCHSystem full;
    ControlLaw control;
    ProjectionMap projection;
    LevelSet level;
};

/// Builds the model; the reduced control (and force) are lifted through the
/// fiber-linear relation dp_angles = B^T dPi. Requires the so3 algebra.
EulerChartModel euler_chart_model(const ReducedSystem& rs, const ReducedControlLaw& u, const Vector& mu_level);

/// Body angular-velocity matrix B with Omega = B(angles) * angle_rates.
Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& angles);
/// R = Rz(phi) Rx(vartheta) Rz(psi).
Eigen::Matrix3d euler_rotation(const Eigen::Vector3d& angles);

/// Samples on J^{-1}(mu) for the Euler chart: random attitude in the regular
/// region, Pi = R^T mu, random rotor coordinates. Deterministic in seed.
std::vector<PhasePoint> euler_level_samples(const ReducedSystem& rs, const Vector& mu, int n, std::uint64_t seed);

}  // namespace chreduct
