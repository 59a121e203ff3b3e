#include "chreduct/rch.hpp"

#include <algorithm>

#include "chreduct/errors.hpp"

namespace chreduct {

ControlSubset::ControlSubset(DirectionField directions, std::string description)
    : directions_(std::move(directions)), description_(std::move(description)) {}

ControlSubset ControlSubset::fixed(const Matrix& d, std::string description) {
    ControlSubset w([d](const Vector&) { return d; }, std::move(description));
    w.directions(Vector::Zero(d.rows()));
    return w;
}

ControlSubset ControlSubset::full(int n) { return fixed(Matrix::Identity(n, n), "full"); }

ControlSubset ControlSubset::none(int n) { return fixed(Matrix::Zero(n, 0), "none"); }

Matrix ControlSubset::directions(const Vector& q) const {
    Matrix d = directions_(q);
    if (d.cols() > 0) {
        Eigen::ColPivHouseholderQR<Matrix> qr(d);
        qr.setThreshold(1e-12);
        if (qr.rank() != d.cols()) {
            throw ConfigError("ControlSubset '" + description_ + "': directions are linearly dependent");
        }
    }
    return d;
}

double ControlSubset::distance(const Vector& q, const Vector& v) const {
    const Matrix d = directions(q);
    if (d.rows() != v.size()) {
        throw DimensionError("ControlSubset: direction length does not match fiber dimension");
    }
    if (d.cols() == 0) {
        return v.norm();
    }
    const Vector coeff = d.colPivHouseholderQr().solve(v);
    return (d * coeff - v).norm();
}

ControlLaw ControlLaw::zero() { return ControlLaw{}; }

ControlLaw ControlLaw::vertical(Field f) {
    ControlLaw u;
    u.kind_ = Kind::vertical_field;
    u.field_ = std::move(f);
    return u;
}

ControlLaw ControlLaw::from_fiber_map(FiberMap f) {
    ControlLaw u;
    u.kind_ = Kind::fiber_map;
    u.map_ = std::move(f);
    return u;
}

Vector ControlLaw::increment(const RCHSystem& sys, const PhasePoint& alpha) const {
    Vector v;
    switch (kind_) {
        case Kind::zero:
            return Vector::Zero(alpha.dim());
        case Kind::vertical_field:
            v = field_(alpha);
            break;
        case Kind::fiber_map: {
            const auto xh = [&sys](const PhasePoint& z) { return canonical_xh(sys.hamiltonian, z); };
            v = vlift_of_map(*map_, xh, alpha).dp;
            break;
        }
    }
    if (v.size() != alpha.dim()) {
        throw DimensionError("ControlLaw: increment length does not match fiber dimension");
    }
    const double dist = sys.control_subset.distance(alpha.q(), v);
    if (dist > kControlTolerance * std::max(1.0, v.norm())) {
        throw ControlError("ControlLaw: value leaves control subset '" + sys.control_subset.description() +
                           "' (distance " + std::to_string(dist) + ")");
    }
    return v;
}

RCHSystem::RCHSystem(PhaseSpaceChart c, ScalarFunction h, std::optional<FiberMap> f, ControlSubset w)
    : chart(std::move(c)), hamiltonian(std::move(h)), force(std::move(f)), control_subset(std::move(w)) {}

TangentSample force_lift(const RCHSystem& sys, const PhasePoint& alpha) {
    if (!sys.force) {
        return {alpha, Vector::Zero(alpha.dim()), Vector::Zero(alpha.dim())};
    }
    const auto xh = [&sys](const PhasePoint& z) { return canonical_xh(sys.hamiltonian, z); };
    return vlift_of_map(*sys.force, xh, alpha);
}

TangentSample dynamical_vf(const RCHSystem& sys, const ControlLaw& u, const PhasePoint& alpha) {
    if (alpha.dim() != sys.chart.n) {
        throw DimensionError("dynamical_vf: point does not belong to chart '" + sys.chart.label + "'");
    }
    TangentSample x = canonical_xh(sys.hamiltonian, alpha);
    x.dp += force_lift(sys, alpha).dp;
    x.dp += u.increment(sys, alpha);
    return x;
}

Trajectory integrate(const RCHSystem& sys, const ControlLaw& u, const PhasePoint& z0, double t_end, double dt) {
    const int n = sys.chart.n;
    const bool has_action = sys.chart.action != GroupAction::none;
    const auto field = [&](const Vector& z) { return dynamical_vf(sys, u, PhasePoint::from_flat(z)).flat(); };
    const auto diag = [&](const Vector& z) {
        Diagnostics d;
        d.energy = sys.hamiltonian(z);
        d.casimirs = Vector(0);
        d.momentum = has_action ? momentum_map(sys.chart, PhasePoint::from_flat(z)).coords() : Vector(0);
        return d;
    };
    Trajectory traj = integrate_rk4(field, z0.flat(), t_end, dt, diag);
    for (int i = 0; i < n; ++i) {
        traj.state_names.push_back("q" + std::to_string(i));
    }
    for (int i = 0; i < n; ++i) {
        traj.state_names.push_back("p" + std::to_string(i));
    }
    if (has_action) {
        const int m = acting_algebra(sys.chart)->dim();
        for (int i = 0; i < m; ++i) {
            traj.momentum_names.push_back("J" + std::to_string(i));
        }
    }
    return traj;
}

}  // namespace chreduct
