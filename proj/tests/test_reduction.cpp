#include <gtest/gtest.h>

#include "chreduct/errors.hpp"
#include "chreduct/registry.hpp"
#include "chreduct/systems.hpp"
#include "support.hpp"

using namespace chreduct;
using testing_support::randn;
using testing_support::vee;

namespace {

RotorParams three_rotors() { return RotorParams::principal(Eigen::Vector3d(0.5, 0.4, 0.3)); }

RotorParams skew_rotors() {
    RotorParams r;
    r.inertias = Eigen::Vector2d(0.3, 0.6);
    Matrix q = Eigen::Matrix3d(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()));
    r.axes = q.leftCols(2);
    return r;
}

double max_drift(const std::vector<double>& xs) {
    double d = 0.0;
    for (double x : xs) {
        d = std::max(d, std::abs(x - xs.front()));
    }
    return d;
}

}  // namespace

TEST(Systems, EulerOracle) {
    const RigidBodyParams p;
    const ReducedSystem rs = free_rigid_body(p);
    std::mt19937_64 rng(31);
    for (int s = 0; s < 100; ++s) {
        const Eigen::Vector3d pi = randn(rng, 3);
        const ReducedTangent t = reduced_vf(rs, {}, rs.unflatten(pi));
        EXPECT_LT((t.dmu - Vector(euler_rhs(p.inertia, pi))).norm(), 1e-12);
        const CoalgebraVector mu(so3(), pi);
        EXPECT_LT((lie_poisson_vf(rs.hamiltonian, mu).coords() - t.dmu).norm(), 1e-12);
    }
}

TEST(Systems, HeavyTopOracleAndEquilibrium) {
    HeavyTopParams p;
    p.chi = Eigen::Vector3d(0.2, -0.3, 1.0).normalized();
    p.mgl = 2.5;
    const ReducedSystem rs = heavy_top(p);
    std::mt19937_64 rng(32);
    for (int s = 0; s < 100; ++s) {
        const Vector x = randn(rng, 6);
        EXPECT_LT((reduced_vf(rs, {}, rs.unflatten(x)).dmu - heavy_top_rhs(p, x)).norm(), 1e-12);
    }
    // hanging/upright top: Pi = 0, Gamma parallel to chi
    Vector eq = Vector::Zero(6);
    eq.tail<3>() = p.chi;
    EXPECT_LT(reduced_vf(rs, {}, rs.unflatten(eq)).dmu.norm(), 1e-15);
}

TEST(Systems, RotorOracles) {
    const RigidBodyParams rb;
    HeavyTopParams ht;
    std::mt19937_64 rng(33);
    for (const RotorParams& r : {three_rotors(), skew_rotors()}) {
        const int k = r.count();
        const ReducedSystem a = rigid_body_with_rotors(rb, r);
        const ReducedSystem b = heavy_top_with_rotors(ht, r);
        for (int s = 0; s < 50; ++s) {
            const Vector u = randn(rng, k);
            const auto torque = [u](const ReducedState&) { return u; };
            const Vector xa = randn(rng, 3 + 2 * k);
            EXPECT_LT((reduced_vf(a, rotor_control(a, torque), a.unflatten(xa)).flat() - rotor_rhs(rb, r, xa, u)).norm(),
                      1e-12);
            const Vector xb = randn(rng, 6 + 2 * k);
            EXPECT_LT(
                (reduced_vf(b, rotor_control(b, torque), b.unflatten(xb)).flat() - heavy_top_rotor_rhs(ht, r, xb, u))
                    .norm(),
                1e-12);
        }
    }
}

TEST(Systems, ParameterValidation) {
    RigidBodyParams bad;
    bad.inertia = Eigen::Vector3d(1, -2, 3);
    EXPECT_THROW(free_rigid_body(bad), ConfigError);
    HeavyTopParams top;
    top.chi = Eigen::Vector3d(0, 0, 2);
    EXPECT_THROW(heavy_top(top), ConfigError);
    RotorParams r = three_rotors();
    r.axes(0, 1) = 0.5;  // not orthonormal
    EXPECT_THROW(rigid_body_with_rotors(RigidBodyParams{}, r), ConfigError);
    const Eigen::Matrix3d lock = locked_inertia(Eigen::Vector3d(1, 2, 3), three_rotors());
    EXPECT_LT((lock - Eigen::Vector3d(1.5, 2.4, 3.3).asDiagonal().toDenseMatrix()).norm(), 1e-15);
}

TEST(Systems, RegistryBuildsAllAndRejectsUnknown) {
    for (const auto& name : system_names()) {
        EXPECT_NO_THROW(make_system(name, nlohmann::json::object())) << name;
    }
    EXPECT_THROW(make_system("spinning-plate", {}), UnknownNameError);
    EXPECT_THROW(make_system("rigid-body", {{"I", {1, 2}}}), ConfigError);
    const ReducedSystem rs = make_system("rigid-body-rotors", parse_assignments({"J=0.2,0.3"}));
    EXPECT_EQ(rs.rotor_dim, 2);
}

TEST(Reduction, ConstantTorqueIsExact) {
    const ReducedSystem rs = rigid_body_with_rotors(RigidBodyParams{}, three_rotors());
    const Vector u = Eigen::Vector3d(0.3, -0.2, 0.1);
    const ReducedControlLaw law = rotor_control(rs, [u](const ReducedState&) { return u; });
    ReducedState s0 = rs.unflatten(Vector::Zero(9));
    s0.mu = Eigen::Vector3d(1, 1, 1);
    s0.l = Eigen::Vector3d(0.1, 0.2, 0.3);
    const Trajectory t = integrate_reduced(rs, law, s0, 2.0, 1e-2);
    const Vector l_end = t.states.back().tail(3);
    EXPECT_LT((l_end - (s0.l + 2.0 * u)).norm(), 1e-12);
}

TEST(Reduction, ConservationForAllShippedSystems) {
    for (const auto& name : system_names()) {
        const ReducedSystem rs = make_system(name, {});
        Vector x = Vector::Zero(rs.state_dim());
        x.head<3>() = Eigen::Vector3d(1.0, 1.0, 1.0);
        if (rs.algebra->dim() == 6) {
            x.segment<3>(3) = Eigen::Vector3d(0.0, 0.6, 0.8);
        }
        x.tail(rs.rotor_dim).setConstant(0.1);
        const Trajectory t = integrate_reduced(rs, {}, rs.unflatten(x), 10.0, 1e-3);
        std::vector<double> energy;
        for (const auto& d : t.diagnostics) {
            energy.push_back(d.energy);
        }
        EXPECT_LT(max_drift(energy), 1e-8) << name;
        EXPECT_TRUE(check_orbit_invariance(rs, t).pass) << name;
        EXPECT_LT(check_orbit_invariance(rs, t).max_residual, 1e-7) << name;
    }
}

TEST(Reduction, RotorControlKeepsOrbit) {
    const ReducedSystem rs = heavy_top_with_rotors(HeavyTopParams{}, three_rotors());
    const ReducedControlLaw law = rotor_control(rs, [](const ReducedState& s) {
        return Vector(Eigen::Vector3d(std::sin(3.0 * s.theta[0]), -0.5 * std::tanh(s.mu[1]), 0.8));
    });
    Vector x = Vector::Zero(12);
    x << 0.3, -0.4, 1.0, 0.0, 0.6, 0.8, 0, 0, 0, 0.1, 0.0, -0.1;
    const Trajectory t = integrate_reduced(rs, law, rs.unflatten(x), 10.0, 1e-3);
    const ResidualReport r = check_orbit_invariance(rs, t);
    EXPECT_LT(r.max_residual, 1e-7);
    // energy is not conserved under control
    EXPECT_GT(std::abs(t.diagnostics.back().energy - t.diagnostics.front().energy), 1e-3);
}

TEST(Reduction, CasimirHamiltonianGivesZeroField) {
    const ReducedSystem rs("casimir", so3(), 0, builtin_casimir("norm2", 3).function, {}, ControlSubset::none(3));
    EXPECT_LT(reduced_vf(rs, {}, rs.unflatten(Eigen::Vector3d(0.3, 2, -1))).flat().norm(), 1e-8);
}

TEST(Reduction, ControlOutsideSubsetRejected) {
    const ReducedSystem rs = free_rigid_body(RigidBodyParams{});
    const ReducedControlLaw kick{[](const ReducedState&) { return Vector(Eigen::Vector3d(1, 0, 0)); }};
    EXPECT_THROW(reduced_vf(rs, kick, rs.unflatten(Eigen::Vector3d(1, 1, 1))), ControlError);
}

TEST(Reduction, EulerRateMatrix) {
    std::mt19937_64 rng(34);
    for (int s = 0; s < 20; ++s) {
        Eigen::Vector3d a = randn(rng, 3);
        a[1] = 0.4 + std::abs(a[1]);
        const Eigen::Vector3d rates = randn(rng, 3);
        const double h = 1e-6;
        const Eigen::Matrix3d rdot = (euler_rotation(a + h * rates) - euler_rotation(a - h * rates)) / (2 * h);
        const Eigen::Vector3d omega = vee(euler_rotation(a).transpose() * rdot);
        EXPECT_LT((omega - euler_rate_matrix(a) * rates).norm(), 1e-8);
    }
}

TEST(Reduction, PointRelatedRigidBody) {
    const ReducedSystem rs = free_rigid_body(RigidBodyParams{});
    const Vector mu = Eigen::Vector3d(1.0, 2.0, 3.0);
    const EulerChartModel m = euler_chart_model(rs, {}, mu);
    const auto samples = euler_level_samples(rs, mu, 200, 7);
    const ResidualReport r = check_point_related(m.full, m.control, rs, {}, m.projection, samples, m.level);
    EXPECT_LT(r.max_residual, 1e-10);
    EXPECT_EQ(r.n_samples, 200);

    // eps |mu|^4 is a Casimir perturbation: the flow, and thus the residual, is unchanged
    const ScalarFunction h = rs.hamiltonian;
    ReducedSystem casimir_perturbed = rs;
    casimir_perturbed.hamiltonian = ScalarFunction(
        [h](const Vector& x) { return h(x) + 1e-3 * std::pow(x.squaredNorm(), 2); },
        [h](const Vector& x) { return Vector(h.grad(x) + 4e-3 * x.squaredNorm() * x); });
    EXPECT_LT(check_point_related(m.full, m.control, casimir_perturbed, {}, m.projection, samples, m.level)
                  .max_residual,
              1e-10);

    const ReducedSystem perturbed = with_quartic_perturbation(rs, 1e-3);
    const ResidualReport bad = check_point_related(m.full, m.control, perturbed, {}, m.projection, samples, m.level);
    EXPECT_GT(bad.max_residual, 1e-4);
    EXPECT_FALSE(bad.pass);
}

TEST(Reduction, PointRelatedRotorsWithControl) {
    const ReducedSystem rs = rigid_body_with_rotors(RigidBodyParams{}, skew_rotors());
    const ReducedControlLaw law = rotor_control(rs, [](const ReducedState& s) {
        return Vector(Eigen::Vector2d(std::cos(s.theta[0]), s.mu[2]));
    });
    const Vector mu = Eigen::Vector3d(-0.5, 1.0, 0.7);
    const EulerChartModel m = euler_chart_model(rs, law, mu);
    const auto samples = euler_level_samples(rs, mu, 100, 8);
    EXPECT_LT(check_point_related(m.full, m.control, rs, law, m.projection, samples, m.level).max_residual, 1e-9);
    // dropping the control on one side breaks the relation
    EXPECT_GT(check_point_related(m.full, m.control, rs, {}, m.projection, samples, m.level).max_residual, 1e-2);
}

TEST(Reduction, OffLevelSampleRejected) {
    const ReducedSystem rs = free_rigid_body(RigidBodyParams{});
    const Vector mu = Eigen::Vector3d(1.0, 2.0, 3.0);
    const EulerChartModel m = euler_chart_model(rs, {}, mu);
    auto samples = euler_level_samples(rs, mu, 3, 9);
    samples.push_back(PhasePoint(samples[0].q(), samples[0].p() * 1.01));
    EXPECT_THROW(check_point_related(m.full, m.control, rs, {}, m.projection, samples, m.level), DomainError);
    EXPECT_THROW(euler_chart_model(heavy_top(HeavyTopParams{}), {}, mu), DomainError);
}

TEST(Reduction, ZeroHamiltonianRelatedTrivially) {
    const ReducedSystem zero("zero", so3(), 0, ScalarFunction([](const Vector&) { return 0.0; },
                                                             [](const Vector& x) { return Vector(Vector::Zero(x.size())); }),
                             {}, ControlSubset::none(3));
    const Vector mu = Eigen::Vector3d(0.0, 0.0, 1.0);
    const EulerChartModel m = euler_chart_model(zero, {}, mu);
    const auto samples = euler_level_samples(zero, mu, 20, 3);
    EXPECT_EQ(check_point_related(m.full, m.control, zero, {}, m.projection, samples, m.level).max_residual, 0.0);
}

TEST(Reduction, SpatialMomentumConservedAlongFullFlow) {
    const ReducedSystem rs = rigid_body_with_rotors(RigidBodyParams{}, three_rotors());
    const Vector mu = Eigen::Vector3d(0.4, -0.3, 1.1);
    const EulerChartModel m = euler_chart_model(rs, {}, mu);
    const PhasePoint z0 = euler_level_samples(rs, mu, 1, 5).front();
    const Trajectory t = integrate(m.full, m.control, z0, 0.5, 1e-3);
    for (const auto& z : t.states) {
        EXPECT_LT((m.level.momentum(PhasePoint::from_flat(z)) - mu).norm(), 1e-9);
    }
}

TEST(Reduction, KksConsistency) {
    const ReducedSystem rs = free_rigid_body(RigidBodyParams{});
    std::mt19937_64 rng(35);
    for (int s = 0; s < 50; ++s) {
        const CoalgebraVector mu(so3(), randn(rng, 3));
        const std::vector<Vector> etas{randn(rng, 3)};
        EXPECT_LT(kks_consistency(so3(), rs.hamiltonian, mu, etas).max_residual, 1e-10);
    }
    EXPECT_THROW(kks_consistency(so3(), rs.hamiltonian, CoalgebraVector(so3(), Vector::Zero(3)), {Vector::Ones(3)}),
                 DomainError);
}
