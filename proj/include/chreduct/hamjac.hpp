#pragma once

// Numerical witnesses for the geometric Hamilton-Jacobi theorem: W solves
// H(q, dW) = E  <=>  dW maps base curves sigma' = dH/dp(sigma, dW(sigma)) to
// integral curves of X_H.

#include <string>
#include <vector>

#include "chreduct/numdiff.hpp"
#include "chreduct/report.hpp"

namespace chreduct {

/// W: Q -> R with gradient dW (analytic preferred).
struct GeneratingFunction {
    ScalarFunction w;

    Vector dw(const Vector& q) const { return w.grad(q); }
};

/// Axis-aligned working box for the configuration.
struct Box {
    Vector lower;
    Vector upper;

    bool contains(const Vector& q) const;
};

inline constexpr double kHjSpreadTolerance = 1e-8;
inline constexpr double kHjDefectTolerance = 1e-5;

struct HjResidualReport {
    double energy = 0.0;  ///< mean of H(q, dW(q)), the E estimate
    double spread = 0.0;  ///< max |H(q, dW(q)) - energy|
    int n_samples = 0;
    double tolerance = kHjSpreadTolerance;
    bool pass = true;

    OrderedJson to_json() const;
};

/// Evaluates H(q, dW(q)) over qs. H acts on stacked (q, p).
HjResidualReport hj_residual(const ScalarFunction& hamiltonian, const GeneratingFunction& w,
                             const std::vector<Vector>& qs, double tolerance = kHjSpreadTolerance);

struct HjCurveReport {
    double max_defect = 0.0;
    double max_energy_deviation = 0.0;  ///< max |H(dW(sigma(t))) - H(dW(sigma(0)))|
    double end_time = 0.0;
    bool truncated = false;              ///< sigma left the box before t_end
    int n_samples = 0;
    double tolerance = kHjDefectTolerance;
    bool pass = true;

    OrderedJson to_json() const;
};

/// Integrates sigma' = dH/dp(sigma, dW(sigma)) by RK4 with step dt, then
/// measures delta(t) = |d/dt (dW o sigma) - X_H(dW o sigma)| with central
/// differences of step dt at interior samples. A box exit truncates the run.
HjCurveReport hj_curve_check(const ScalarFunction& hamiltonian, const GeneratingFunction& w, const Vector& q0,
                             double t_end, double dt, const Box& box, double tolerance = kHjDefectTolerance);

/// One entry of the equivalence table.
struct HjCase {
    std::string name;
    ScalarFunction hamiltonian;
    GeneratingFunction w;
    Box box;
    std::vector<Vector> residual_points;
    Vector q0;
    double t_end = 0.5;
    double dt = 1e-4;
    bool expected_solution = true;
};

struct HjCaseResult {
    std::string name;
    HjResidualReport residual;
    HjCurveReport curve;
    bool expected_solution = true;

    bool agree() const { return residual.pass == curve.pass; }
    bool matches_expected() const { return residual.pass == expected_solution && curve.pass == expected_solution; }
    OrderedJson to_json() const;
};

struct HjTable {
    std::vector<HjCaseResult> rows;
    int disagreements = 0;

    bool pass() const { return disagreements == 0; }
    OrderedJson to_json() const;
};

/// Runs both checks per case; any case where they disagree is a failure.
HjTable hj_equivalence_suite(const std::vector<HjCase>& cases);

/// n points per axis, evenly spaced over the box (endpoints included).
std::vector<Vector> grid_points(const Box& box, int per_axis);

}  // namespace chreduct
