#include "chreduct/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "chreduct/errors.hpp"

namespace chreduct {

void Trajectory::validate() const {
    if (states.size() != times.size() || diagnostics.size() != times.size()) {
        throw DomainError("Trajectory: sequences have different lengths");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw DomainError("Trajectory: times must be strictly increasing");
        }
    }
}

Vector rk4_step(const VectorMap& f, const Vector& y, double h) {
    const Vector k1 = f(y);
    const Vector k2 = f(y + 0.5 * h * k1);
    const Vector k3 = f(y + 0.5 * h * k2);
    const Vector k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate_rk4(const VectorMap& f, const Vector& y0, double t_end, double dt,
                         const DiagnosticsFn& diagnostics) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw ConfigError("integrate: dt and t_end must be positive");
    }
    if (!y0.allFinite()) {
        throw IntegrationError(0, "integrate: non-finite initial state");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.diagnostics.reserve(steps + 1);

    Vector y = y0;
    traj.times.push_back(0.0);
    traj.states.push_back(y);
    traj.diagnostics.push_back(diagnostics(y));
    for (std::size_t i = 1; i <= steps; ++i) {
        Vector next;
        try {
            next = rk4_step(f, y, h);
        } catch (const DomainError&) {
            throw IntegrationError(i, "integrate: non-finite state");
        }
        if (!next.allFinite()) {
            throw IntegrationError(i, "integrate: non-finite state");
        }
        y = std::move(next);
        traj.times.push_back(static_cast<double>(i) * h);
        traj.states.push_back(y);
        traj.diagnostics.push_back(diagnostics(y));
    }
    return traj;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    traj.validate();
    out << 't';
    for (const auto& n : traj.state_names) {
        out << ',' << n;
    }
    out << ",energy";
    for (const auto& n : traj.casimir_names) {
        out << ',' << n;
    }
    for (const auto& n : traj.momentum_names) {
        out << ',' << n;
    }
    out << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_real(traj.times[i]);
        for (Eigen::Index k = 0; k < traj.states[i].size(); ++k) {
            out << ',' << format_real(traj.states[i][k]);
        }
        const auto& d = traj.diagnostics[i];
        out << ',' << format_real(d.energy);
        for (Eigen::Index k = 0; k < d.casimirs.size(); ++k) {
            out << ',' << format_real(d.casimirs[k]);
        }
        for (Eigen::Index k = 0; k < d.momentum.size(); ++k) {
            out << ',' << format_real(d.momentum[k]);
        }
        out << '\n';
    }
}

}  // namespace chreduct
