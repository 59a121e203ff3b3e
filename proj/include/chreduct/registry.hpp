#pragma once

// Named built-ins addressable from JSON / the command line.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chreduct/equivalence.hpp"
#include "chreduct/hamjac.hpp"
#include "chreduct/systems.hpp"

namespace chreduct {

/// "rigid-body", "heavy-top", "rigid-body-rotors", "heavy-top-rotors".
const std::vector<std::string>& system_names();

/// Builds a shipped system. Params keys: I (3), mgl, chi (3), J (k), axes (k x 3).
/// Throws UnknownNameError naming the registry, ConfigError for bad params.
ReducedSystem make_system(const std::string& name, const nlohmann::json& params);

/// "I=1,2,3" style assignments to a JSON object (lists for commas, numbers
/// otherwise). Throws ConfigError on malformed entries.
nlohmann::json parse_assignments(const std::vector<std::string>& assignments);

/// Comma-separated reals.
Vector parse_reals(const std::string& text);

// Hamilton-Jacobi built-ins. Hamiltonians on T*R^n: "free-particle",
// "oscillator" {omega}, "polynomial" {terms: [[coef, e_1..e_2n], ...]}.
// Generating functions: "linear" {c}, "quadratic" {a}, "oscillator-exact"
// {eps: adds eps q^3}, "polynomial" {terms: [[coef, e_1..e_n], ...]}.
ScalarFunction hj_hamiltonian(const std::string& name, const nlohmann::json& params, int n);
GeneratingFunction hj_generating_function(const std::string& name, const nlohmann::json& params, int n);

/// Case file: {"hamiltonian":{"name","params"},"W":{"name","params"},
/// "domain":{"lower","upper"},"expected":"solution"|"non-solution",
/// optional "q0","t_end","dt","grid"}.
HjCase hj_case_from_json(const nlohmann::json& doc, const std::string& name);

/// Shipped HJ cases: exact oscillator, free particle, the non-solution
/// W = q^2 and the cubic perturbations eps in {0, 1e-2}.
std::vector<HjCase> shipped_hj_cases();

/// n-dimensional random polynomial case (degree <= 4). Solutions use
/// H = |p|^2/2 + E - |grad W|^2/2 with W of degree <= 3; non-solutions add a
/// linear potential to H.
HjCase random_hj_case(int n, bool solution, std::uint64_t seed);

/// Two systems plus phi, u2 and samples alpha1 in T*Q1.
struct EquivalencePair {
    std::string name;
    RCHSystem sys1;
    RCHSystem sys2;
    ConfigDiffeo phi;
    ControlLaw u2;
    std::vector<PhasePoint> samples;
};

/// Oscillator H1 = (p^2+q^2)/2 against H2(q,p) = H1(q/2, 2p) under phi(q) = 2q,
/// full control subsets and damping u2 = -p2. With force1 != 0 an extra force
/// (q,p) -> (q, force1 * q) acts on sys1; with full_control = false both
/// control subsets are {0}.
EquivalencePair rescaled_oscillator_pair(double force1 = 0.0, bool full_control = true, int n_samples = 200,
                                         std::uint64_t seed = 1);

/// Random well-conditioned linear phi on R^n, quadratic H2, affine forces,
/// H1 = H2 o phi_*, full control subsets and a linear vertical u2.
EquivalencePair random_linear_pair(int n, std::uint64_t seed, int n_samples = 50);

/// "rescaled-oscillator", "rescaled-oscillator-forced", "random-linear".
EquivalencePair make_pair(const std::string& name, const nlohmann::json& params, std::uint64_t seed, int n_samples);
const std::vector<std::string>& pair_names();

}  // namespace chreduct
