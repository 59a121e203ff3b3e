#include "chreduct/phasespace.hpp"

#include <algorithm>
#include <cmath>

#include "chreduct/errors.hpp"

namespace chreduct {

namespace {

constexpr double kFiberTolerance = 1e-12;

bool same_fiber(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        return false;
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - b).cwiseAbs().maxCoeff() <= kFiberTolerance * scale;
}

}  // namespace

PhaseSpaceChart::PhaseSpaceChart(int config_dim, std::string name, GroupAction act)
    : n(config_dim), label(std::move(name)), action(act) {
    if (n < 1) {
        throw DimensionError("PhaseSpaceChart: configuration dimension must be >= 1");
    }
    if (action == GroupAction::rotation && n != 3) {
        throw DimensionError("PhaseSpaceChart: rotation action needs a 3-dimensional configuration space");
    }
}

PhasePoint::PhasePoint(Vector q, Vector p) : q_(std::move(q)), p_(std::move(p)) {
    if (q_.size() != p_.size()) {
        throw DimensionError("PhasePoint: q and p lengths differ");
    }
    if (!q_.allFinite() || !p_.allFinite()) {
        throw DomainError("PhasePoint: non-finite coordinate");
    }
}

PhasePoint PhasePoint::from_flat(const Vector& z) {
    if (z.size() % 2 != 0) {
        throw DimensionError("PhasePoint: stacked vector must have even length");
    }
    const Eigen::Index n = z.size() / 2;
    return {z.head(n), z.tail(n)};
}

Vector PhasePoint::flat() const {
    Vector z(2 * q_.size());
    z << q_, p_;
    return z;
}

TangentSample::TangentSample(PhasePoint b, Vector dq_, Vector dp_)
    : base(std::move(b)), dq(std::move(dq_)), dp(std::move(dp_)) {
    if (dq.size() != base.dim() || dp.size() != base.dim()) {
        throw DimensionError("TangentSample: component lengths do not match base point");
    }
}

bool TangentSample::is_vertical() const { return (dq.array() == 0.0).all(); }

Vector TangentSample::flat() const {
    Vector v(2 * dq.size());
    v << dq, dp;
    return v;
}

FiberMap::FiberMap(Evaluator f, MatrixMap jacobian) : f_(std::move(f)), jac_(std::move(jacobian)) {}

PhasePoint FiberMap::operator()(const PhasePoint& z) const {
    PhasePoint out = f_(z);
    if (!same_fiber(out.q(), z.q())) {
        throw FiberError("FiberMap: map is not fiber-preserving at this point");
    }
    return out;
}

Matrix FiberMap::tangent_map(const PhasePoint& z) const {
    Matrix m;
    if (jac_) {
        m = jac_(z.flat());
    } else {
        m = fd_jacobian([this](const Vector& x) { return f_(PhasePoint::from_flat(x)).flat(); }, z.flat());
    }
    if (!m.allFinite()) {
        throw GradientError("FiberMap: non-finite Jacobian");
    }
    return m;
}

FiberMap FiberMap::identity() {
    return FiberMap([](const PhasePoint& z) { return z; },
                    [](const Vector& z) { return Matrix(Matrix::Identity(z.size(), z.size())); });
}

FiberMap FiberMap::zero_section() {
    return FiberMap([](const PhasePoint& z) { return PhasePoint(z.q(), Vector::Zero(z.dim())); },
                    [](const Vector& z) {
                        const Eigen::Index n = z.size() / 2;
                        Matrix m = Matrix::Zero(2 * n, 2 * n);
                        m.topLeftCorner(n, n).setIdentity();
                        return m;
                    });
}

FiberMap FiberMap::translation(const Vector& c) {
    return FiberMap([c](const PhasePoint& z) { return PhasePoint(z.q(), z.p() + c); },
                    [](const Vector& z) { return Matrix(Matrix::Identity(z.size(), z.size())); });
}

FiberMap FiberMap::affine(const Matrix& k, const Matrix& l, const Vector& c) {
    return FiberMap([k, l, c](const PhasePoint& z) { return PhasePoint(z.q(), k * z.p() + l * z.q() + c); },
                    [k, l](const Vector& z) {
                        const Eigen::Index n = z.size() / 2;
                        Matrix m = Matrix::Zero(2 * n, 2 * n);
                        m.topLeftCorner(n, n).setIdentity();
                        m.bottomLeftCorner(n, n) = l;
                        m.bottomRightCorner(n, n) = k;
                        return m;
                    });
}

TangentSample canonical_xh(const ScalarFunction& hamiltonian, const PhasePoint& z) {
    const Vector g = hamiltonian.grad(z.flat());
    const int n = z.dim();
    if (g.size() != 2 * n) {
        throw DimensionError("canonical_xh: Hamiltonian gradient has wrong length");
    }
    return {z, g.tail(n), -g.head(n)};
}

TangentSample vlift_fiber(const TangentSample& rho, const PhasePoint& a) {
    if (!same_fiber(rho.base.q(), a.q())) {
        throw DomainError("vlift_fiber: points lie on different fibers");
    }
    return {a, Vector::Zero(a.dim()), rho.dp};
}

TangentSample vlift_of_map(const FiberMap& f, const PhaseVectorField& x, const PhasePoint& alpha,
                           LiftReading reading) {
    const PhasePoint image = f(alpha);
    Vector pushed;
    if (reading == LiftReading::pushforward) {
        pushed = f.tangent_map(alpha) * x(alpha).flat();
    } else {
        pushed = f.tangent_map(image) * x(image).flat();
    }
    const int n = alpha.dim();
    const TangentSample at_image(image, pushed.head(n), pushed.tail(n));
    return vlift_fiber(at_image, alpha);
}

Vector infinitesimal_generator(GroupAction action, const Vector& xi, const Vector& q) {
    switch (action) {
        case GroupAction::translation:
            return xi;
        case GroupAction::rotation: {
            const Eigen::Vector3d w = xi.head<3>();
            const Eigen::Vector3d x = q.head<3>();
            return w.cross(x);
        }
        case GroupAction::none:
            break;
    }
    throw DomainError("infinitesimal_generator: chart has no registered action");
}

AlgebraPtr acting_algebra(const PhaseSpaceChart& chart) {
    switch (chart.action) {
        case GroupAction::translation:
            return abelian(chart.n);
        case GroupAction::rotation:
            return so3();
        case GroupAction::none:
            break;
    }
    throw DomainError("momentum_map: chart '" + chart.label + "' has no registered action");
}

CoalgebraVector momentum_map(const PhaseSpaceChart& chart, const PhasePoint& z) {
    const AlgebraPtr g = acting_algebra(chart);
    if (z.dim() != chart.n) {
        throw DimensionError("momentum_map: point does not belong to chart '" + chart.label + "'");
    }
    Vector j(g->dim());
    for (int i = 0; i < g->dim(); ++i) {
        const Vector e = Vector::Unit(g->dim(), i);
        j[i] = z.p().dot(infinitesimal_generator(chart.action, e, z.q()));
    }
    return {g, j};
}

}  // namespace chreduct
