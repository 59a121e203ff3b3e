#include "chreduct/hamjac.hpp"

#include <algorithm>
#include <cmath>

#include "chreduct/errors.hpp"
#include "chreduct/trajectory.hpp"

namespace chreduct {

namespace {

Vector stack(const Vector& q, const Vector& p) {
    Vector z(q.size() + p.size());
    z << q, p;
    return z;
}

}  // namespace

bool Box::contains(const Vector& q) const {
    return q.size() == lower.size() && (q.array() >= lower.array()).all() && (q.array() <= upper.array()).all();
}

OrderedJson HjResidualReport::to_json() const {
    OrderedJson j;
    j["check"] = "hj-residual";
    j["energy"] = energy;
    j["spread"] = spread;
    j["n_samples"] = n_samples;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j;
}

OrderedJson HjCurveReport::to_json() const {
    OrderedJson j;
    j["check"] = "hj-curve";
    j["max_defect"] = max_defect;
    j["max_energy_deviation"] = max_energy_deviation;
    j["end_time"] = end_time;
    j["truncated"] = truncated;
    j["n_samples"] = n_samples;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j;
}

OrderedJson HjCaseResult::to_json() const {
    OrderedJson j;
    j["case"] = name;
    j["expected"] = expected_solution ? "solution" : "non-solution";
    j["residual"] = residual.to_json();
    j["curve"] = curve.to_json();
    j["agree"] = agree();
    j["matches_expected"] = matches_expected();
    return j;
}

OrderedJson HjTable::to_json() const {
    OrderedJson j;
    j["check"] = "hj-equivalence";
    j["cases"] = OrderedJson::array();
    for (const auto& r : rows) {
        j["cases"].push_back(r.to_json());
    }
    j["disagreements"] = disagreements;
    j["pass"] = pass();
    return j;
}

HjResidualReport hj_residual(const ScalarFunction& hamiltonian, const GeneratingFunction& w,
                             const std::vector<Vector>& qs, double tolerance) {
    HjResidualReport r;
    r.tolerance = tolerance;
    std::vector<double> values;
    values.reserve(qs.size());
    for (const auto& q : qs) {
        values.push_back(hamiltonian(stack(q, w.dw(q))));
    }
    r.n_samples = static_cast<int>(values.size());
    if (values.empty()) {
        return r;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    r.energy = sum / static_cast<double>(values.size());
    for (double v : values) {
        r.spread = std::max(r.spread, std::abs(v - r.energy));
    }
    r.pass = std::isfinite(r.spread) && r.spread < tolerance;
    return r;
}

HjCurveReport hj_curve_check(const ScalarFunction& hamiltonian, const GeneratingFunction& w, const Vector& q0,
                             double t_end, double dt, const Box& box, double tolerance) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw ConfigError("hj_curve_check: dt and t_end must be positive");
    }
    if (!box.contains(q0)) {
        throw DomainError("hj_curve_check: q0 outside the working box");
    }
    const Eigen::Index n = q0.size();
    const auto base_field = [&](const Vector& q) -> Vector {
        return hamiltonian.grad(stack(q, w.dw(q))).tail(n);
    };

    HjCurveReport r;
    r.tolerance = tolerance;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::vector<Vector> sigma{q0};
    for (std::size_t i = 1; i <= steps; ++i) {
        Vector next = rk4_step(base_field, sigma.back(), dt);
        if (!next.allFinite() || !box.contains(next)) {
            r.truncated = true;
            break;
        }
        sigma.push_back(std::move(next));
    }
    r.end_time = static_cast<double>(sigma.size() - 1) * dt;

    std::vector<Vector> lifted;
    lifted.reserve(sigma.size());
    for (const auto& q : sigma) {
        lifted.push_back(stack(q, w.dw(q)));
    }
    const double e0 = hamiltonian(lifted.front());
    for (const auto& z : lifted) {
        r.max_energy_deviation = std::max(r.max_energy_deviation, std::abs(hamiltonian(z) - e0));
    }
    for (std::size_t i = 1; i + 1 < lifted.size(); ++i) {
        const Vector rate = (lifted[i + 1] - lifted[i - 1]) / (2.0 * dt);
        const Vector g = hamiltonian.grad(lifted[i]);
        Vector xh(2 * n);
        xh << g.tail(n), -g.head(n);
        r.max_defect = std::max(r.max_defect, (rate - xh).norm());
        ++r.n_samples;
    }
    r.pass = r.n_samples > 0 && std::isfinite(r.max_defect) && r.max_defect < tolerance;
    return r;
}

HjTable hj_equivalence_suite(const std::vector<HjCase>& cases) {
    HjTable table;
    for (const auto& c : cases) {
        HjCaseResult row;
        row.name = c.name;
        row.expected_solution = c.expected_solution;
        row.residual = hj_residual(c.hamiltonian, c.w, c.residual_points);
        row.curve = hj_curve_check(c.hamiltonian, c.w, c.q0, c.t_end, c.dt, c.box);
        if (!row.agree()) {
            ++table.disagreements;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<Vector> grid_points(const Box& box, int per_axis) {
    const Eigen::Index n = box.lower.size();
    if (per_axis < 2) {
        throw ConfigError("grid_points: need at least two points per axis");
    }
    std::vector<Vector> out;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Vector q(n);
        for (Eigen::Index d = 0; d < n; ++d) {
            const double t = static_cast<double>(idx[static_cast<std::size_t>(d)]) / (per_axis - 1);
            q[d] = box.lower[d] + t * (box.upper[d] - box.lower[d]);
        }
        out.push_back(q);
        Eigen::Index d = 0;
        while (d < n && ++idx[static_cast<std::size_t>(d)] == per_axis) {
            idx[static_cast<std::size_t>(d)] = 0;
            ++d;
        }
        if (d == n) {
            break;
        }
    }
    return out;
}

}  // namespace chreduct
