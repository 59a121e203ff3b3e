#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "chreduct/numdiff.hpp"

namespace chreduct {

/// Per-sample diagnostics recorded along a trajectory.
struct Diagnostics {
    double energy = 0.0;
    Vector casimirs;
    Vector momentum;
};

/// Time-stamped states with diagnostics. Times strictly increase and the
/// three sequences have equal length.
struct Trajectory {
    std::vector<std::string> state_names;
    std::vector<std::string> casimir_names;
    std::vector<std::string> momentum_names;

    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Diagnostics> diagnostics;

    std::size_t size() const { return times.size(); }
    /// Throws DomainError if the structural invariants fail.
    void validate() const;
};

using DiagnosticsFn = std::function<Diagnostics(const Vector&)>;

/// One classical RK4 step of y' = f(y).
Vector rk4_step(const VectorMap& f, const Vector& y, double h);

/// Fixed-step RK4 from 0 to t_end. The step is t_end / ceil(t_end / dt), so
/// the last sample lands on t_end exactly. Throws IntegrationError with the
/// step index if the state turns non-finite.
Trajectory integrate_rk4(const VectorMap& f, const Vector& y0, double t_end, double dt,
                         const DiagnosticsFn& diagnostics);

/// CSV with header t,<state>,energy,<casimirs>,<momentum>; 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& out);

/// Shortest "%.17g" rendering used by every text artifact.
std::string format_real(double v);

}  // namespace chreduct
