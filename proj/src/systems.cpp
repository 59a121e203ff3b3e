#include "chreduct/systems.hpp"

#include <cmath>

#include "chreduct/errors.hpp"

namespace chreduct {

namespace {

void require_positive_inertia(const Eigen::Vector3d& inertia) {
    if (!inertia.allFinite() || (inertia.array() <= 0.0).any()) {
        throw ConfigError("inertia entries must be positive");
    }
}

ControlSubset rotor_block(int d, int k) {
    Matrix dirs = Matrix::Zero(d + k, k);
    dirs.bottomRows(k).setIdentity();
    return ControlSubset::fixed(dirs, "rotor torques");
}

/// h and its gradient for (Pi, extra..., theta, l) where the rotor coupling
/// only involves Pi and l; `extra` covers Gamma for the heavy top.
struct RotorEnergy {
    Eigen::Matrix3d lock_inv;
    Matrix axes;
    Vector j_inv;

    Eigen::Vector3d omega(const Eigen::Vector3d& pi, const Vector& l) const {
        return lock_inv * (pi - axes * l);
    }
    double value(const Eigen::Vector3d& pi, const Vector& l) const {
        const Eigen::Vector3d m = pi - axes * l;
        return 0.5 * m.dot(lock_inv * m) + 0.5 * l.dot(j_inv.cwiseProduct(l));
    }
    Vector dl(const Eigen::Vector3d& pi, const Vector& l) const {
        return -axes.transpose() * omega(pi, l) + j_inv.cwiseProduct(l);
    }
};

RotorEnergy rotor_energy(const Eigen::Vector3d& inertia, const RotorParams& rotors) {
    return {locked_inertia(inertia, rotors).inverse(), rotors.axes, rotors.inertias.cwiseInverse()};
}

}  // namespace

void RigidBodyParams::validate() const { require_positive_inertia(inertia); }

void HeavyTopParams::validate() const {
    require_positive_inertia(inertia);
    if (!std::isfinite(mgl) || mgl < 0.0) {
        throw ConfigError("heavy top: mgl must be >= 0");
    }
    if (std::abs(chi.norm() - 1.0) > 1e-12) {
        throw ConfigError("heavy top: chi must be a unit vector");
    }
}

RotorParams RotorParams::principal(const Vector& inertias) {
    RotorParams r;
    r.inertias = inertias;
    r.axes = Matrix::Identity(3, 3).leftCols(inertias.size());
    return r;
}

void RotorParams::validate() const {
    const auto k = inertias.size();
    if (k > 3) {
        throw ConfigError("rotors: at most 3 rotors");
    }
    if (!inertias.allFinite() || (inertias.array() <= 0.0).any()) {
        throw ConfigError("rotors: inertias must be positive");
    }
    if (axes.rows() != 3 || axes.cols() != k) {
        throw ConfigError("rotors: axes must be a 3 x k matrix");
    }
    if ((axes.transpose() * axes - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("rotors: axes must be orthonormal");
    }
}

Eigen::Matrix3d locked_inertia(const Eigen::Vector3d& inertia, const RotorParams& rotors) {
    rotors.validate();
    const Eigen::Matrix3d lock = Eigen::Matrix3d(inertia.asDiagonal()) +
                                 rotors.axes * rotors.inertias.asDiagonal() * rotors.axes.transpose();
    Eigen::LLT<Eigen::Matrix3d> llt(lock);
    if (llt.info() != Eigen::Success) {
        throw ConfigError("rotors: locked inertia is not positive-definite");
    }
    return lock;
}

ReducedSystem free_rigid_body(const RigidBodyParams& params) {
    params.validate();
    const Eigen::Vector3d inv = params.inertia.cwiseInverse();
    ScalarFunction h([inv](const Vector& x) { return 0.5 * x.head<3>().dot(inv.cwiseProduct(x.head<3>())); },
                     [inv](const Vector& x) { return Vector(inv.cwiseProduct(x.head<3>())); });
    return {"rigid-body", so3(), 0, std::move(h), {}, ControlSubset::none(3)};
}

ReducedSystem heavy_top(const HeavyTopParams& params) {
    params.validate();
    const Eigen::Vector3d inv = params.inertia.cwiseInverse();
    const Eigen::Vector3d g = params.mgl * params.chi;
    ScalarFunction h(
        [inv, g](const Vector& x) {
            return 0.5 * x.head<3>().dot(inv.cwiseProduct(x.head<3>())) + g.dot(x.segment<3>(3));
        },
        [inv, g](const Vector& x) {
            Vector grad(6);
            grad << inv.cwiseProduct(x.head<3>()), g;
            return grad;
        });
    return {"heavy-top", se3(), 0, std::move(h), {}, ControlSubset::none(6)};
}

ReducedSystem rigid_body_with_rotors(const RigidBodyParams& params, const RotorParams& rotors) {
    params.validate();
    rotors.validate();
    const RotorEnergy e = rotor_energy(params.inertia, rotors);
    const int k = rotors.count();
    ScalarFunction h([e, k](const Vector& x) { return e.value(x.head<3>(), x.tail(k)); },
                     [e, k](const Vector& x) {
                         Vector grad = Vector::Zero(3 + 2 * k);
                         grad.head<3>() = e.omega(x.head<3>(), x.tail(k));
                         grad.tail(k) = e.dl(x.head<3>(), x.tail(k));
                         return grad;
                     });
    return {"rigid-body-rotors", so3(), k, std::move(h), {}, rotor_block(3, k)};
}

ReducedSystem heavy_top_with_rotors(const HeavyTopParams& params, const RotorParams& rotors) {
    params.validate();
    rotors.validate();
    const RotorEnergy e = rotor_energy(params.inertia, rotors);
    const Eigen::Vector3d g = params.mgl * params.chi;
    const int k = rotors.count();
    ScalarFunction h([e, g, k](const Vector& x) { return e.value(x.head<3>(), x.tail(k)) + g.dot(x.segment<3>(3)); },
                     [e, g, k](const Vector& x) {
                         Vector grad = Vector::Zero(6 + 2 * k);
                         grad.head<3>() = e.omega(x.head<3>(), x.tail(k));
                         grad.segment<3>(3) = g;
                         grad.tail(k) = e.dl(x.head<3>(), x.tail(k));
                         return grad;
                     });
    return {"heavy-top-rotors", se3(), k, std::move(h), {}, rotor_block(6, k)};
}

ReducedControlLaw rotor_control(const ReducedSystem& rs, std::function<Vector(const ReducedState&)> torque) {
    const int d = rs.algebra->dim();
    const int k = rs.rotor_dim;
    return {[torque = std::move(torque), d, k](const ReducedState& s) {
        Vector inc = Vector::Zero(d + k);
        inc.tail(k) = torque(s);
        return inc;
    }};
}

Eigen::Vector3d euler_rhs(const Eigen::Vector3d& inertia, const Eigen::Vector3d& pi) {
    const Eigen::Vector3d omega = pi.cwiseQuotient(inertia);
    return pi.cross(omega);
}

Vector heavy_top_rhs(const HeavyTopParams& params, const Vector& pi_gamma) {
    const Eigen::Vector3d pi = pi_gamma.head<3>();
    const Eigen::Vector3d gamma = pi_gamma.segment<3>(3);
    const Eigen::Vector3d omega = pi.cwiseQuotient(params.inertia);
    Vector out(6);
    out << pi.cross(omega) + params.mgl * gamma.cross(params.chi), gamma.cross(omega);
    return out;
}

Vector rotor_rhs(const RigidBodyParams& params, const RotorParams& rotors, const Vector& state, const Vector& u) {
    const int k = rotors.count();
    const Eigen::Matrix3d lock = Eigen::Matrix3d(params.inertia.asDiagonal()) +
                                 rotors.axes * rotors.inertias.asDiagonal() * rotors.axes.transpose();
    const Eigen::Vector3d pi = state.head<3>();
    const Vector l = state.tail(k);
    const Eigen::Vector3d omega = lock.partialPivLu().solve(pi - rotors.axes * l);
    Vector out(3 + 2 * k);
    out << pi.cross(omega), l.cwiseQuotient(rotors.inertias) - rotors.axes.transpose() * omega, u;
    return out;
}

Vector heavy_top_rotor_rhs(const HeavyTopParams& params, const RotorParams& rotors, const Vector& state,
                           const Vector& u) {
    const int k = rotors.count();
    const Eigen::Matrix3d lock = Eigen::Matrix3d(params.inertia.asDiagonal()) +
                                 rotors.axes * rotors.inertias.asDiagonal() * rotors.axes.transpose();
    const Eigen::Vector3d pi = state.head<3>();
    const Eigen::Vector3d gamma = state.segment<3>(3);
    const Vector l = state.tail(k);
    const Eigen::Vector3d omega = lock.partialPivLu().solve(pi - rotors.axes * l);
    Vector out(6 + 2 * k);
    out << pi.cross(omega) + params.mgl * gamma.cross(params.chi), gamma.cross(omega),
        l.cwiseQuotient(rotors.inertias) - rotors.axes.transpose() * omega, u;
    return out;
}

}  // namespace chreduct
