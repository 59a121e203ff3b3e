// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are pinned
// below and never read from the environment.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "chreduct/cli.hpp"
#include "chreduct/errors.hpp"
#include "chreduct/registry.hpp"

using namespace chreduct;

namespace {

constexpr double kAlgebraTol = 1e-12;
constexpr double kOracleTol = 1e-12;
constexpr double kEnergyDriftTol = 1e-8;
constexpr double kCasimirDriftTol = 1e-7;
constexpr double kRelatedTol = 1e-10;
constexpr double kNegativeControlFloor = 1e-4;
constexpr double kKksTol = 1e-10;
constexpr double kClosedLoopTol = 1e-6;
constexpr double kHjDefectTol = 1e-5;
constexpr double kOrderLow = 12.0;
constexpr double kOrderHigh = 20.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Vector randn(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> d;
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = d(rng);
    }
    return v;
}

Vector default_state(const ReducedSystem& rs) {
    Vector x = Vector::Zero(rs.state_dim());
    x.head<3>() = Eigen::Vector3d(1.0, 1.0, 1.0);
    if (rs.algebra->dim() == 6) {
        x.segment<3>(3) = Eigen::Vector3d(0.0, 0.6, 0.8);
    }
    x.tail(rs.rotor_dim).setConstant(0.1);
    return x;
}

double casimir_drift(const Trajectory& t) {
    double d = 0.0;
    for (const auto& s : t.diagnostics) {
        if (s.casimirs.size() > 0) {
            d = std::max(d, (s.casimirs - t.diagnostics.front().casimirs).cwiseAbs().maxCoeff());
        }
    }
    return d;
}

Outcome algebra_correctness() {
    double jac = 0.0, pair = 0.0;
    for (const auto& g : {so3(), se3(), direct_sum(so3(), abelian(2)), direct_sum(so3(), se3())}) {
        const AlgebraInvariants inv = check_invariants(*g, 100, 1);
        jac = std::max(jac, inv.jacobi);
        pair = std::max(pair, inv.pairing);
    }
    return {jac < kAlgebraTol && pair < kAlgebraTol,
            "jacobi " + fmt("%.2e", jac) + ", pairing " + fmt("%.2e", pair)};
}

Outcome euler_oracle() {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    const RigidBodyParams rb;
    const HeavyTopParams ht;
    const RotorParams rotors = RotorParams::principal(Eigen::Vector3d(0.5, 0.5, 0.5));
    const ReducedSystem body = free_rigid_body(rb);
    const ReducedSystem top = heavy_top(ht);
    const ReducedSystem body_rotors = rigid_body_with_rotors(rb, rotors);
    const ReducedSystem top_rotors = heavy_top_with_rotors(ht, rotors);
    for (int s = 0; s < 100; ++s) {
        const Eigen::Vector3d pi = randn(rng, 3);
        const Vector generic = lie_poisson_vf(body.hamiltonian, CoalgebraVector(so3(), pi)).coords();
        worst = std::max(worst, (generic - Vector(euler_rhs(rb.inertia, pi))).norm());

        const Vector pg = randn(rng, 6);
        worst = std::max(worst, (reduced_vf(top, {}, top.unflatten(pg)).flat() - heavy_top_rhs(ht, pg)).norm());

        const Vector u = randn(rng, 3);
        const auto torque = [u](const ReducedState&) { return u; };
        const Vector xa = randn(rng, 9);
        worst = std::max(worst, (reduced_vf(body_rotors, rotor_control(body_rotors, torque), body_rotors.unflatten(xa))
                                     .flat() -
                                 rotor_rhs(rb, rotors, xa, u))
                                    .norm());
        const Vector xb = randn(rng, 12);
        worst = std::max(worst, (reduced_vf(top_rotors, rotor_control(top_rotors, torque), top_rotors.unflatten(xb))
                                     .flat() -
                                 heavy_top_rotor_rhs(ht, rotors, xb, u))
                                    .norm());
    }
    return {worst < kOracleTol, "max |generic - hand-coded| " + fmt("%.2e", worst) + " over 4 systems x 100 states"};
}

Outcome conservation() {
    double energy = 0.0, casimir = 0.0;
    for (const auto& name : system_names()) {
        const ReducedSystem rs = make_system(name, nlohmann::json::object());
        const Trajectory t = integrate_reduced(rs, {}, rs.unflatten(default_state(rs)), 10.0, 1e-3);
        for (const auto& d : t.diagnostics) {
            energy = std::max(energy, std::abs(d.energy - t.diagnostics.front().energy));
        }
        casimir = std::max(casimir, casimir_drift(t));
    }
    return {energy < kEnergyDriftTol && casimir < kCasimirDriftTol,
            "energy drift " + fmt("%.2e", energy) + ", Casimir drift " + fmt("%.2e", casimir)};
}

Outcome verticality() {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> dim(1, 4);
    int mismatches = 0;
    for (int s = 0; s < 200; ++s) {
        const int n = dim(rng);
        const Matrix k = Matrix(randn(rng, n * n).reshaped(n, n));
        const Matrix l = Matrix(randn(rng, n * n).reshaped(n, n));
        const Vector w = randn(rng, n);
        const ScalarFunction h([w](const Vector& z) {
            const auto m = z.size() / 2;
            return 0.5 * z.tail(m).squaredNorm() + std::sin(w.dot(z.head(m))) * z.tail(m).sum();
        });
        const RCHSystem sys(PhaseSpaceChart(n, "random"), h, FiberMap::affine(k, l, randn(rng, n)),
                            ControlSubset::full(n));
        const Vector gain = randn(rng, n);
        const ControlLaw u = ControlLaw::vertical([gain](const PhasePoint& z) {
            return Vector(gain.cwiseProduct(z.q()).array().tanh());
        });
        const PhasePoint z(randn(rng, n), randn(rng, n));
        if (dynamical_vf(sys, u, z).dq != canonical_xh(h, z).dq) {
            ++mismatches;
        }
    }
    double drift = 0.0;
    for (const char* name : {"rigid-body-rotors", "heavy-top-rotors"}) {
        const ReducedSystem rs = make_system(name, nlohmann::json::object());
        const ReducedControlLaw law = rotor_control(rs, [](const ReducedState& s) {
            return Vector(Eigen::Vector3d(std::sin(5.0 * s.theta[0]), std::tanh(s.mu[1] * s.l[2]), -0.7));
        });
        drift = std::max(drift, casimir_drift(integrate_reduced(rs, law, rs.unflatten(default_state(rs)), 10.0, 1e-3)));
    }
    return {mismatches == 0 && drift < kCasimirDriftTol,
            std::to_string(mismatches) + "/200 dq mismatches, controlled Casimir drift " + fmt("%.2e", drift)};
}

Outcome pi_related() {
    const ReducedSystem rs = free_rigid_body(RigidBodyParams{});
    const Vector mu = Eigen::Vector3d(1.0, 2.0, 3.0);
    const EulerChartModel m = euler_chart_model(rs, {}, mu);
    const auto samples = euler_level_samples(rs, mu, 200, 5);
    const double good =
        check_point_related(m.full, m.control, rs, {}, m.projection, samples, m.level, kRelatedTol).max_residual;
    const double bad = check_point_related(m.full, m.control, with_quartic_perturbation(rs, 1e-3), {}, m.projection,
                                           samples, m.level, kRelatedTol)
                           .max_residual;
    return {good < kRelatedTol && bad > kNegativeControlFloor,
            "residual " + fmt("%.2e", good) + " on 200 samples, perturbed (eps mu_0^4, eps=1e-3) " + fmt("%.2e", bad)};
}

Outcome kks() {
    const ReducedSystem rs = free_rigid_body(RigidBodyParams{});
    std::mt19937_64 rng(6);
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
        Vector mu = randn(rng, 3);
        while (mu.norm() < 1e-3) {
            mu = randn(rng, 3);
        }
        worst = std::max(worst,
                         kks_consistency(so3(), rs.hamiltonian, CoalgebraVector(so3(), mu), {randn(rng, 3)}, kKksTol)
                             .max_residual);
    }
    return {worst < kKksTol, "max residual " + fmt("%.2e", worst) + " at 50 (mu, eta) pairs"};
}

Outcome equivalence() {
    double loop = 0.0;
    bool matched = true;
    std::vector<EquivalencePair> pairs{rescaled_oscillator_pair()};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        pairs.push_back(random_linear_pair(1 + static_cast<int>(seed % 4), seed, 20));
    }
    for (const auto& p : pairs) {
        const EquivalenceReport r = verify_equivalence(p.sys1, p.sys2, p.phi, p.u2, p.samples);
        matched = matched && r.pass && r.closed_loop_residual.has_value();
        loop = std::max(loop, r.closed_loop_residual.value_or(1.0));
    }
    // non-matching: kinetic energies disagree, so the relation has a horizontal part
    int rejected = 0;
    const EquivalencePair base = rescaled_oscillator_pair();
    for (double mass : {0.5, 2.0, 3.0}) {
        const RCHSystem wrong(PhaseSpaceChart(1, "wrong"), ScalarFunction([mass](const Vector& z) {
                                  return 0.5 * (z[0] * z[0] / 4.0 + 4.0 * mass * z[1] * z[1]);
                              }),
                              std::nullopt, ControlSubset::full(1));
        const bool failed = !matching_residual(base.sys1, wrong, base.phi, base.samples).pass;
        try {
            solve_control(base.sys1, wrong, base.phi, base.u2, base.samples.front());
        } catch (const MatchingViolation&) {
            rejected += failed ? 1 : 0;
        }
    }
    return {matched && loop < kClosedLoopTol && rejected == 3,
            "51 pairs, closed-loop max " + fmt("%.2e", loop) + ", " + std::to_string(rejected) +
                "/3 non-matching pairs raised a verticality error"};
}

Outcome hamilton_jacobi() {
    std::vector<HjCase> cases = shipped_hj_cases();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        cases.push_back(random_hj_case(1 + static_cast<int>(seed % 3), seed % 2 == 1, seed));
    }
    const HjTable t = hj_equivalence_suite(cases);
    double exact_defect = 0.0;
    bool expected = true;
    for (const auto& row : t.rows) {
        expected = expected && row.matches_expected();
        if (row.name == "oscillator-exact") {
            exact_defect = row.curve.max_defect;
        }
    }
    return {t.disagreements == 0 && expected && exact_defect < kHjDefectTol,
            std::to_string(t.rows.size()) + " cases, " + std::to_string(t.disagreements) +
                " disagreements, exact defect " + fmt("%.2e", exact_defect) + " at dt=1e-4"};
}

Outcome integrator_order() {
    const RCHSystem osc(PhaseSpaceChart(1, "oscillator"), hj_hamiltonian("oscillator", {}, 1), std::nullopt,
                        ControlSubset::none(1));
    const PhasePoint z0(Vector::Constant(1, 1.0), Vector::Constant(1, 0.0));
    const Vector exact = Eigen::Vector2d(std::cos(5.0), -std::sin(5.0));
    auto err = [&](double dt) {
        return (integrate(osc, ControlLaw::zero(), z0, 5.0, dt).states.back() - exact).norm();
    };
    const double ratio = err(0.05) / err(0.025);
    return {ratio >= kOrderLow && ratio <= kOrderHigh, "error ratio " + fmt("%.3f", ratio)};
}

Outcome cli_contract() {
    const std::string fx = CHREDUCT_FIXTURES;
    auto call = [](std::vector<std::string> args, std::string* out = nullptr) {
        args.insert(args.begin(), "chreduct");
        std::ostringstream o, e;
        const int code = cli::run(args, o, e);
        if (out) {
            *out = o.str();
        }
        return code;
    };
    struct Expect {
        std::vector<std::string> args;
        int code;
    };
    const std::vector<Expect> table{
        {{"list-systems"}, cli::kPass},
        {{"check-hj", "--case", fx + "/oscillator-exact.json", "--case", fx + "/plane-wave.json"}, cli::kPass},
        {{"check-related", "--system", "rigid-body", "--perturb", "1e-3"}, cli::kCheckFailed},
        {{"simulate", "--system", "spinning-plate"}, cli::kUnknownName},
        {{"check-hj", "--case", fx + "/malformed.json"}, cli::kBadInput},
        {{"invariants", "--out", "/nonexistent-dir/x.json"}, cli::kOutputError},
    };
    int ok = 0;
    for (const auto& e : table) {
        ok += call(e.args) == e.code ? 1 : 0;
    }
    std::string a, b, c, d;
    call({"simulate", "--config", fx + "/simulate-config.json"}, &a);
    call({"simulate", "--config", fx + "/simulate-config.json"}, &b);
    call({"check-equiv", "--pair", "random-linear", "--seed", "9"}, &c);
    call({"check-equiv", "--pair", "random-linear", "--seed", "9"}, &d);
    const bool same = !a.empty() && a == b && !c.empty() && c == d;
    return {ok == static_cast<int>(table.size()) && same,
            std::to_string(ok) + "/" + std::to_string(table.size()) + " exit codes, repeat runs " +
                (same ? "identical" : "differ")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_s;  // 0 = no runtime bound
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "algebra correctness", 1.0, algebra_correctness},
        {2, "Euler-equation oracle", 1.0, euler_oracle},
        {3, "conservation suite", 30.0, conservation},
        {4, "verticality of force/control", 0.0, verticality},
        {5, "pi-relatedness", 0.0, pi_related},
        {6, "KKS consistency", 0.0, kks},
        {7, "equivalence synthesis", 10.0, equivalence},
        {8, "Hamilton-Jacobi bi-implication", 30.0, hamilton_jacobi},
        {9, "integrator order", 0.0, integrator_order},
        {10, "CLI determinism and exit codes", 0.0, cli_contract},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = o.pass;
        std::string timing = fmt("%.2f s", secs);
        if (c.budget_s > 0.0) {
            timing += " (budget " + fmt("%g", c.budget_s) + " s)";
            pass = pass && secs < c.budget_s;
        }
        std::printf("%s [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), timing.c_str());
        failed += pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
