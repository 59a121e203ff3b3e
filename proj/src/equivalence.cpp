#include "chreduct/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "chreduct/errors.hpp"

namespace chreduct {

namespace {

Eigen::FullPivLU<Matrix> invertible_jacobian(const ConfigDiffeo& phi, const Vector& q1) {
    const Matrix d = phi.jacobian_at(q1);
    Eigen::FullPivLU<Matrix> lu(d);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        throw DomainError("cotangent lift: Jacobian of phi is singular");
    }
    return lu;
}

Matrix structure_matrix(Eigen::Index n) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n).setIdentity();
    j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return j;
}

/// Jacobian at alpha1 of the fiber map phi* G phi_* (G given as a FiberMap on T*Q2).
Matrix pulled_back_tangent(const ConfigDiffeo& phi, const FiberMap& g, const PhasePoint& alpha1) {
    const PhasePoint z2 = cotangent_push(phi, alpha1);
    const PhasePoint gz2 = g(z2);
    const Matrix lift_at_image = cotangent_lift_tangent(phi, gz2);
    const Matrix push_at_alpha = cotangent_lift_tangent(phi, z2).inverse();
    return lift_at_image * g.tangent_map(z2) * push_at_alpha;
}

/// Vertical part of vlift(phi* G phi_*) X_H1 at alpha1.
Vector pulled_back_lift(const ConfigDiffeo& phi, const FiberMap& g, const RCHSystem& sys1,
                        const PhasePoint& alpha1) {
    const Vector v = pulled_back_tangent(phi, g, alpha1) * canonical_xh(sys1.hamiltonian, alpha1).flat();
    return v.tail(alpha1.dim());
}

/// vlift(phi* u2 phi_*) at alpha1.
Vector pulled_back_control(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                           const ControlLaw& u2, const PhasePoint& alpha1) {
    const int n = alpha1.dim();
    switch (u2.kind()) {
        case ControlLaw::Kind::zero:
            return Vector::Zero(n);
        case ControlLaw::Kind::vertical_field: {
            const PhasePoint z2 = cotangent_push(phi, alpha1);
            Vector v = Vector::Zero(2 * n);
            v.tail(n) = u2.increment(sys2, z2);
            return (cotangent_lift_tangent(phi, z2) * v).tail(n);
        }
        case ControlLaw::Kind::fiber_map:
            return pulled_back_lift(phi, *u2.fiber_map(), sys1, alpha1);
    }
    return Vector::Zero(n);
}

/// m = X_H1 + vlift(F1) X_H1 - T(phi*) X_H2 - vlift(phi* F2 phi_*) X_H1, stacked.
Vector mismatch(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi, const PhasePoint& alpha1) {
    const int n = alpha1.dim();
    const PhasePoint z2 = cotangent_push(phi, alpha1);
    Vector m = canonical_xh(sys1.hamiltonian, alpha1).flat();
    m.tail(n) += force_lift(sys1, alpha1).dp;
    m -= cotangent_lift_tangent(phi, z2) * canonical_xh(sys2.hamiltonian, z2).flat();
    if (sys2.force) {
        m.tail(n) -= pulled_back_lift(phi, *sys2.force, sys1, alpha1);
    }
    return m;
}

/// Largest distance between span(a) and span(b) column-wise (1 if ranks differ).
double span_mismatch(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        return 1.0;
    }
    if (a.cols() == 0) {
        return 0.0;
    }
    double worst = 0.0;
    auto dist = [](const Matrix& basis, const Vector& v) {
        const Vector c = basis.colPivHouseholderQr().solve(v);
        return (basis * c - v).norm() / std::max(v.norm(), 1e-300);
    };
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        worst = std::max(worst, dist(b, a.col(j)));
        worst = std::max(worst, dist(a, b.col(j)));
    }
    return worst;
}

}  // namespace

Matrix ConfigDiffeo::jacobian_at(const Vector& q1) const {
    Matrix d = jacobian ? jacobian(q1) : fd_jacobian(forward, q1);
    if (!d.allFinite()) {
        throw GradientError("ConfigDiffeo: non-finite Jacobian");
    }
    return d;
}

double ConfigDiffeo::roundtrip_residual(const std::vector<Vector>& q2s) const {
    double worst = 0.0;
    for (const auto& q2 : q2s) {
        worst = std::max(worst, (forward(inverse(q2)) - q2).cwiseAbs().maxCoeff());
    }
    return worst;
}

ConfigDiffeo ConfigDiffeo::identity() {
    return {[](const Vector& q) { return q; }, [](const Vector& q) { return q; },
            [](const Vector& q) { return Matrix(Matrix::Identity(q.size(), q.size())); }};
}

ConfigDiffeo ConfigDiffeo::linear(const Matrix& a) {
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) {
        throw DomainError("ConfigDiffeo::linear: matrix is singular");
    }
    const Matrix inv = lu.inverse();
    return {[a](const Vector& q) { return Vector(a * q); }, [inv](const Vector& q) { return Vector(inv * q); },
            [a](const Vector&) { return a; }};
}

ConfigDiffeo ConfigDiffeo::scaling(double s) {
    if (s == 0.0) {
        throw DomainError("ConfigDiffeo::scaling: zero factor");
    }
    return {[s](const Vector& q) { return Vector(s * q); }, [s](const Vector& q) { return Vector(q / s); },
            [s](const Vector& q) { return Matrix(s * Matrix::Identity(q.size(), q.size())); }};
}

PhasePoint cotangent_lift(const ConfigDiffeo& phi, const PhasePoint& z2) {
    const Vector q1 = phi.inverse(z2.q());
    const Matrix d = phi.jacobian_at(q1);
    invertible_jacobian(phi, q1);
    return {q1, d.transpose() * z2.p()};
}

PhasePoint cotangent_push(const ConfigDiffeo& phi, const PhasePoint& z1) {
    const auto lu = invertible_jacobian(phi, z1.q());
    const Matrix dinv_t = lu.inverse().transpose();
    return {phi.forward(z1.q()), dinv_t * z1.p()};
}

Matrix cotangent_lift_tangent(const ConfigDiffeo& phi, const PhasePoint& z2) {
    const Eigen::Index n = z2.dim();
    const Vector q1 = phi.inverse(z2.q());
    const Matrix d = phi.jacobian_at(q1);
    const Matrix dinv = invertible_jacobian(phi, q1).inverse();
    const Vector p2 = z2.p();
    // d/dq1 of Dphi(q1)^T p2
    const Matrix dp1_dq1 = fd_jacobian([&](const Vector& q) { return Vector(phi.jacobian_at(q).transpose() * p2); }, q1);
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    m.topLeftCorner(n, n) = dinv;
    m.bottomLeftCorner(n, n) = dp1_dq1 * dinv;
    m.bottomRightCorner(n, n) = d.transpose();
    return m;
}

double symplectic_residual(const ConfigDiffeo& phi, const PhasePoint& z2) {
    const Matrix m = cotangent_lift_tangent(phi, z2);
    const Matrix j = structure_matrix(z2.dim());
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

OrderedJson EquivalenceReport::to_json() const {
    OrderedJson j;
    j["check"] = "equivalence";
    j["rch1_symplectic_residual"] = rch1_symplectic_residual;
    j["control_subset_residual"] = control_subset_residual;
    j["horizontal_residual"] = horizontal_residual;
    j["vertical_excess"] = vertical_excess;
    j["closed_loop_residual"] = closed_loop_residual ? OrderedJson(*closed_loop_residual) : OrderedJson(nullptr);
    j["n_samples"] = n_samples;
    j["pass"] = pass;
    return j;
}

EquivalenceReport matching_residual(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                                    const std::vector<PhasePoint>& samples) {
    if (sys1.chart.n != sys2.chart.n) {
        throw DimensionError("matching_residual: charts have different dimensions");
    }
    EquivalenceReport r;
    for (const auto& alpha1 : samples) {
        const int n = alpha1.dim();
        const PhasePoint z2 = cotangent_push(phi, alpha1);
        r.rch1_symplectic_residual = std::max(r.rch1_symplectic_residual, symplectic_residual(phi, z2));

        const Matrix w2_pulled = phi.jacobian_at(alpha1.q()).transpose() * sys2.control_subset.directions(z2.q());
        r.control_subset_residual =
            std::max(r.control_subset_residual, span_mismatch(sys1.control_subset.directions(alpha1.q()), w2_pulled));

        const Vector m = mismatch(sys1, sys2, phi, alpha1);
        r.horizontal_residual = std::max(r.horizontal_residual, m.head(n).norm());
        r.vertical_excess = std::max(r.vertical_excess, sys1.control_subset.distance(alpha1.q(), m.tail(n)));
        ++r.n_samples;
    }
    r.pass = r.rch1_symplectic_residual < kSymplecticTolerance && r.control_subset_residual < kSymplecticTolerance &&
             r.horizontal_residual < kMatchingTolerance && r.vertical_excess < kMatchingTolerance;
    return r;
}

Vector solve_control(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi, const ControlLaw& u2,
                     const PhasePoint& alpha1) {
    const int n = alpha1.dim();
    Vector rhs = -mismatch(sys1, sys2, phi, alpha1);
    const double horizontal = rhs.head(n).norm();
    if (horizontal > kVerticalityTolerance) {
        throw MatchingViolation(horizontal, "solve_control: control relation is not vertical (horizontal residual " +
                                                std::to_string(horizontal) + ")");
    }
    return rhs.tail(n) + pulled_back_control(sys1, sys2, phi, u2, alpha1);
}

ControlLaw synthesize_control(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                              const ControlLaw& u2) {
    return ControlLaw::vertical(
        [sys1, sys2, phi, u2](const PhasePoint& alpha1) { return solve_control(sys1, sys2, phi, u2, alpha1); });
}

ResidualReport closed_loop_check(const RCHSystem& sys1, const ControlLaw& u1, const RCHSystem& sys2,
                                 const ControlLaw& u2, const ConfigDiffeo& phi, const std::vector<PhasePoint>& z2s,
                                 double tolerance) {
    ResidualReport report;
    report.check = "closed-loop";
    report.tolerance = tolerance;
    for (const auto& z2 : z2s) {
        const PhasePoint alpha1 = cotangent_lift(phi, z2);
        const Vector lhs = dynamical_vf(sys1, u1, alpha1).flat();
        const Vector rhs = cotangent_lift_tangent(phi, z2) * dynamical_vf(sys2, u2, z2).flat();
        report.add((lhs - rhs).norm());
    }
    report.finish();
    return report;
}

EquivalenceReport verify_equivalence(const RCHSystem& sys1, const RCHSystem& sys2, const ConfigDiffeo& phi,
                                     const ControlLaw& u2, const std::vector<PhasePoint>& samples) {
    EquivalenceReport r = matching_residual(sys1, sys2, phi, samples);
    if (!r.pass) {
        return r;
    }
    std::vector<PhasePoint> z2s;
    z2s.reserve(samples.size());
    for (const auto& a : samples) {
        z2s.push_back(cotangent_push(phi, a));
    }
    const ControlLaw u1 = synthesize_control(sys1, sys2, phi, u2);
    const ResidualReport loop = closed_loop_check(sys1, u1, sys2, u2, phi, z2s);
    r.closed_loop_residual = loop.max_residual;
    r.pass = loop.pass;
    return r;
}

ResidualReport check_level_preservation(const ConfigDiffeo& phi, const PhaseSpaceChart& chart1, const Vector& mu1,
                                        const std::vector<PhasePoint>& z2s, double tolerance) {
    ResidualReport report;
    report.check = "level-preservation";
    report.tolerance = tolerance;
    for (const auto& z2 : z2s) {
        report.add((momentum_map(chart1, cotangent_lift(phi, z2)).coords() - mu1).norm());
    }
    report.finish();
    return report;
}

}  // namespace chreduct
