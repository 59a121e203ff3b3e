#include "chreduct/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/AutoDiff>

#include "chreduct/errors.hpp"

namespace chreduct {

Vector ReducedState::flat() const {
    Vector x(mu.size() + theta.size() + l.size());
    x << mu, theta, l;
    return x;
}

Vector ReducedTangent::flat() const {
    Vector x(dmu.size() + dtheta.size() + dl.size());
    x << dmu, dtheta, dl;
    return x;
}

ReducedSystem::ReducedSystem(std::string n, AlgebraPtr g, int k, ScalarFunction h, ReducedIncrement f,
                             ControlSubset w)
    : name(std::move(n)),
      algebra(std::move(g)),
      rotor_dim(k),
      hamiltonian(std::move(h)),
      force(std::move(f)),
      control_subset(std::move(w)) {
    if (rotor_dim < 0) {
        throw DimensionError("ReducedSystem: rotor dimension must be nonnegative");
    }
}

ReducedState ReducedSystem::unflatten(const Vector& x) const {
    if (x.size() != state_dim()) {
        throw DimensionError("ReducedSystem '" + name + "': state length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(state_dim()));
    }
    const int d = algebra->dim();
    return {x.head(d), x.segment(d, rotor_dim), x.tail(rotor_dim)};
}

void ReducedSystem::validate(const ReducedState& s) const {
    if (s.mu.size() != algebra->dim() || s.theta.size() != rotor_dim || s.l.size() != rotor_dim) {
        throw DimensionError("ReducedSystem '" + name + "': state dimensions do not match");
    }
    if (!s.mu.allFinite() || !s.theta.allFinite() || !s.l.allFinite()) {
        throw DomainError("ReducedSystem '" + name + "': non-finite state");
    }
}

ReducedTangent reduced_vf(const ReducedSystem& rs, const ReducedControlLaw& u, const ReducedState& s) {
    rs.validate(s);
    const int d = rs.algebra->dim();
    const int k = rs.rotor_dim;
    const Vector grad = rs.hamiltonian.grad(s.flat());
    if (grad.size() != rs.state_dim()) {
        throw DimensionError("reduced_vf: Hamiltonian gradient has wrong length");
    }
    const Vector dh_dmu = grad.head(d);
    const Vector dh_dtheta = grad.segment(d, k);
    const Vector dh_dl = grad.tail(k);

    Vector vertical = Vector::Zero(d + k);
    if (rs.force) {
        const Vector f = rs.force(s);
        if (f.size() != d + k) {
            throw DimensionError("reduced_vf: force increment has wrong length");
        }
        vertical += f;
    }
    if (u.field) {
        const Vector c = u.field(s);
        if (c.size() != d + k) {
            throw DimensionError("reduced_vf: control increment has wrong length");
        }
        const double dist = rs.control_subset.distance(s.mu, c);
        if (dist > kControlTolerance * std::max(1.0, c.norm())) {
            throw ControlError("reduced_vf: control leaves '" + rs.control_subset.description() + "' (distance " +
                               std::to_string(dist) + ")");
        }
        vertical += c;
    }
    ReducedTangent t;
    t.dmu = rs.algebra->ad_star(dh_dmu, s.mu) + vertical.head(d);
    t.dtheta = dh_dl;
    t.dl = -dh_dtheta + vertical.tail(k);
    return t;
}

Trajectory integrate_reduced(const ReducedSystem& rs, const ReducedControlLaw& u, const ReducedState& s0,
                             double t_end, double dt) {
    rs.validate(s0);
    const int d = rs.algebra->dim();
    const auto field = [&](const Vector& x) { return reduced_vf(rs, u, rs.unflatten(x)).flat(); };
    const auto diag = [&](const Vector& x) {
        Diagnostics out;
        out.energy = rs.hamiltonian(x);
        out.casimirs = Vector(static_cast<Eigen::Index>(rs.algebra->casimirs().size()));
        for (std::size_t i = 0; i < rs.algebra->casimirs().size(); ++i) {
            out.casimirs[static_cast<Eigen::Index>(i)] = rs.algebra->casimirs()[i].function(x.head(d));
        }
        out.momentum = Vector(0);
        return out;
    };
    Trajectory traj = integrate_rk4(field, s0.flat(), t_end, dt, diag);
    for (int i = 0; i < d; ++i) {
        traj.state_names.push_back("mu" + std::to_string(i));
    }
    for (int i = 0; i < rs.rotor_dim; ++i) {
        traj.state_names.push_back("theta" + std::to_string(i));
    }
    for (int i = 0; i < rs.rotor_dim; ++i) {
        traj.state_names.push_back("l" + std::to_string(i));
    }
    for (const auto& c : rs.algebra->casimirs()) {
        traj.casimir_names.push_back(c.name);
    }
    return traj;
}

Matrix ProjectionMap::tangent_map(const PhasePoint& z) const {
    if (jacobian) {
        return jacobian(z.flat());
    }
    return fd_jacobian([this](const Vector& x) { return evaluator(PhasePoint::from_flat(x)).flat(); }, z.flat());
}

ResidualReport check_point_related(const RCHSystem& full, const ControlLaw& full_u, const ReducedSystem& rs,
                                   const ReducedControlLaw& red_u, const ProjectionMap& proj,
                                   const std::vector<PhasePoint>& samples, const std::optional<LevelSet>& level,
                                   double tolerance) {
    ResidualReport report;
    report.check = "point-related";
    report.tolerance = tolerance;
    for (const auto& z : samples) {
        if (level) {
            const double off = (level->momentum(z) - level->mu).norm();
            if (off > kLevelSetTolerance) {
                throw DomainError("check_point_related: sample off the level set (J-residual " +
                                  std::to_string(off) + ")");
            }
        }
        const Vector pushed = proj.tangent_map(z) * dynamical_vf(full, full_u, z).flat();
        const Vector reduced = reduced_vf(rs, red_u, proj.evaluator(z)).flat();
        report.add((pushed - reduced).norm());
    }
    report.finish();
    return report;
}

ReducedSystem with_quartic_perturbation(const ReducedSystem& rs, double eps, int axis) {
    if (axis < 0 || axis >= rs.algebra->dim()) {
        throw DimensionError("with_quartic_perturbation: axis out of range");
    }
    ReducedSystem out = rs;
    const ScalarFunction h = rs.hamiltonian;
    out.hamiltonian = ScalarFunction(
        [h, eps, axis](const Vector& x) { return h(x) + eps * std::pow(x[axis], 4); },
        [h, eps, axis](const Vector& x) {
            Vector g = h.grad(x);
            g[axis] += 4.0 * eps * std::pow(x[axis], 3);
            return g;
        });
    return out;
}

ResidualReport check_orbit_invariance(const ReducedSystem& rs, const Trajectory& traj, double tolerance) {
    traj.validate();
    ResidualReport report;
    report.check = "orbit-invariance";
    report.tolerance = tolerance;
    const int d = rs.algebra->dim();
    if (traj.size() == 0) {
        report.finish();
        return report;
    }
    const Vector mu0 = traj.states.front().head(d);
    for (const auto& x : traj.states) {
        double drift = 0.0;
        for (const auto& c : rs.algebra->casimirs()) {
            drift = std::max(drift, std::abs(c.function(x.head(d)) - c.function(mu0)));
        }
        report.add(drift);
    }
    report.finish();
    return report;
}

ResidualReport kks_consistency(const AlgebraPtr& g, const ScalarFunction& h, const CoalgebraVector& mu,
                               const std::vector<Vector>& etas, double tolerance) {
    if (mu.coords().norm() == 0.0) {
        throw DomainError("kks_consistency: mu = 0 has a point orbit");
    }
    ResidualReport report;
    report.check = "kks-consistency";
    report.tolerance = tolerance;
    const Vector x = lie_poisson_vf(h, mu).coords();
    const Vector dh = h.grad(mu.coords());
    // X_h = ad*_xi mu; any solution works since the form kills the isotropy algebra.
    const Matrix a = g->ad_star_matrix(mu.coords());
    const Vector xi = a.completeOrthogonalDecomposition().solve(x);
    for (const auto& eta : etas) {
        const Vector y = g->ad_star(eta, mu.coords());
        const double omega = -mu.coords().dot(g->bracket(xi, eta));
        report.add(std::abs(omega - dh.dot(y)));
    }
    report.finish();
    return report;
}

namespace {

template <typename T>
Eigen::Matrix<T, 3, 1> body_momentum(const Eigen::Matrix<T, 3, 1>& angles, const Eigen::Vector3d& p) {
    using std::cos;
    using std::sin;
    const T st = sin(angles[1]);
    const T ct = cos(angles[1]);
    const T sp = sin(angles[2]);
    const T cp = cos(angles[2]);
    const T a = (p[0] - ct * p[2]) / st;
    Eigen::Matrix<T, 3, 1> pi;
    pi[0] = sp * a + cp * p[1];
    pi[1] = cp * a - sp * p[1];
    pi[2] = T(p[2]);
    return pi;
}

/// d(Pi)/d(angles) at fixed p.
Eigen::Matrix3d body_momentum_angle_jacobian(const Eigen::Vector3d& angles, const Eigen::Vector3d& p) {
    using Ad = Eigen::AutoDiffScalar<Eigen::Vector3d>;
    Eigen::Matrix<Ad, 3, 1> x;
    for (int i = 0; i < 3; ++i) {
        x[i] = Ad(angles[i], 3, i);
    }
    const auto pi = body_momentum(x, p);
    Eigen::Matrix3d jac;
    for (int i = 0; i < 3; ++i) {
        jac.row(i) = pi[i].derivatives().transpose();
    }
    return jac;
}

Eigen::Matrix3d rot_x(double a) {
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

Eigen::Matrix3d rot_z(double a) {
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

}  // namespace

Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& angles) {
    const double st = std::sin(angles[1]);
    const double ct = std::cos(angles[1]);
    const double sp = std::sin(angles[2]);
    const double cp = std::cos(angles[2]);
    Eigen::Matrix3d b;
    b << st * sp, cp, 0.0,
         st * cp, -sp, 0.0,
         ct, 0.0, 1.0;
    return b;
}

Eigen::Matrix3d euler_rotation(const Eigen::Vector3d& angles) {
    return rot_z(angles[0]) * rot_x(angles[1]) * rot_z(angles[2]);
}

EulerChartModel euler_chart_model(const ReducedSystem& rs, const ReducedControlLaw& u, const Vector& mu_level) {
    if (rs.algebra->dim() != 3 || rs.algebra->name() != "so3") {
        throw DomainError("euler_chart_model: needs a system on so(3)*");
    }
    const int k = rs.rotor_dim;
    const int n = 3 + k;

    auto project = [k](const PhasePoint& z) {
        const Eigen::Vector3d angles = z.q().head<3>();
        const Eigen::Vector3d pa = z.p().head<3>();
        ReducedState s;
        s.mu = body_momentum<double>(angles, pa);
        s.theta = z.q().tail(k);
        s.l = z.p().tail(k);
        return s;
    };
    auto project_jacobian = [k, n](const Vector& flat) {
        const Eigen::Vector3d angles = flat.head<3>();
        const Eigen::Vector3d pa = flat.segment<3>(n);
        Matrix jac = Matrix::Zero(3 + 2 * k, 2 * n);
        jac.block<3, 3>(0, 0) = body_momentum_angle_jacobian(angles, pa);
        jac.block<3, 3>(0, n) = euler_rate_matrix(angles).transpose().inverse();
        jac.block(3, 3, k, k).setIdentity();
        jac.block(3 + k, n + 3, k, k).setIdentity();
        return jac;
    };

    const ScalarFunction h = rs.hamiltonian;
    const ScalarFunction full_h(
        [h, project](const Vector& z) { return h(project(PhasePoint::from_flat(z)).flat()); },
        [h, project, project_jacobian](const Vector& z) -> Vector {
            const Vector g = h.grad(project(PhasePoint::from_flat(z)).flat());
            return project_jacobian(z).transpose() * g;
        });

    // Vertical reduced increments (dPi, dl) lift to (B^T dPi, dl) on the fiber.
    ControlLaw control = ControlLaw::zero();
    const ReducedIncrement f = rs.force;
    const ReducedIncrement c = u.field;
    if (f || c) {
        control = ControlLaw::vertical([f, c, project, k](const PhasePoint& z) {
            const ReducedState s = project(z);
            Vector inc = Vector::Zero(3 + k);
            if (f) {
                inc += f(s);
            }
            if (c) {
                inc += c(s);
            }
            Vector out(3 + k);
            out.head<3>() = euler_rate_matrix(z.q().head<3>()).transpose() * inc.head<3>();
            out.tail(k) = inc.tail(k);
            return out;
        });
    }

    RCHSystem full(PhaseSpaceChart(n, rs.name + "-euler-chart"), full_h, std::nullopt, ControlSubset::full(n));

    LevelSet level;
    level.mu = mu_level;
    level.momentum = [project](const PhasePoint& z) -> Vector {
        const Eigen::Vector3d pi = project(z).mu;
        return euler_rotation(z.q().head<3>()) * pi;
    };
    return {std::move(full), std::move(control), ProjectionMap{project, project_jacobian}, std::move(level)};
}

std::vector<PhasePoint> euler_level_samples(const ReducedSystem& rs, const Vector& mu, int n, std::uint64_t seed) {
    const int k = rs.rotor_dim;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::uniform_real_distribution<double> tilt(0.3, M_PI - 0.3);
    std::normal_distribution<double> normal;
    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d angles(angle(rng), tilt(rng), angle(rng));
        const Eigen::Vector3d pi = euler_rotation(angles).transpose() * mu.head<3>();
        Vector q(3 + k);
        Vector p(3 + k);
        q.head<3>() = angles;
        p.head<3>() = euler_rate_matrix(angles).transpose() * pi;
        for (int j = 0; j < k; ++j) {
            q[3 + j] = angle(rng);
            p[3 + j] = normal(rng);
        }
        out.emplace_back(q, p);
    }
    return out;
}

}  // namespace chreduct
