#pragma once

// Finite-dimensional Lie algebras given by structure constants, with the
// coadjoint machinery needed for Lie-Poisson dynamics on the dual.
//
// Conventions:
//   [e_i, e_j] = sum_k c[i][j][k] e_k
//   <mu, xi>   = coordinate dot product (dual basis identified with R^n)
//   ad*_xi mu  is defined by <ad*_xi mu, eta> = <mu, [xi, eta]>
//   Lie-Poisson flow: mu' = ad*_{grad h(mu)} mu   (body convention; Euler's
//   equations come out as Pi' = Pi x Omega)

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chreduct/numdiff.hpp"

namespace chreduct {

/// A named Casimir function on the dual of an algebra.
struct Casimir {
    std::string name;
    ScalarFunction function;
};

class LieAlgebra;
using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// Immutable Lie algebra. Construction validates antisymmetry, the Jacobi
/// identity (1e-12) and Casimir invariance (sampled Lie-Poisson brackets).
class LieAlgebra {
public:
    /// Dense structure constants indexed (i*dim + j)*dim + k.
    static AlgebraPtr create(std::string name, int dim, std::vector<double> structure_constants,
                             std::vector<Casimir> casimirs = {});

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const std::vector<Casimir>& casimirs() const { return casimirs_; }

    double c(int i, int j, int k) const {
        return constants_[static_cast<std::size_t>((i * dim_ + j) * dim_ + k)];
    }

    /// Coordinates of [xi, eta].
    Vector bracket(const Vector& xi, const Vector& eta) const;
    /// Coordinates of ad*_xi mu.
    Vector ad_star(const Vector& xi, const Vector& mu) const;
    /// Matrix A(mu) with ad*_xi mu = A(mu) xi.
    Matrix ad_star_matrix(const Vector& mu) const;

    /// Largest |Jacobi cyclic sum| over all basis triples.
    double jacobi_residual() const;
    /// Largest |c_ijk + c_jik|.
    double antisymmetry_residual() const;

    bool same_as(const LieAlgebra& other) const;

private:
    LieAlgebra(std::string name, int dim, std::vector<double> constants, std::vector<Casimir> casimirs);

    void validate() const;

    std::string name_;
    int dim_;
    std::vector<double> constants_;
    std::vector<Casimir> casimirs_;
};

/// Element xi of g in the fixed basis.
class AlgebraVector {
public:
    AlgebraVector(AlgebraPtr algebra, Vector coords);

    const AlgebraPtr& algebra() const { return algebra_; }
    const Vector& coords() const { return coords_; }

private:
    AlgebraPtr algebra_;
    Vector coords_;
};

/// Element mu of g* in the dual basis.
class CoalgebraVector {
public:
    CoalgebraVector(AlgebraPtr algebra, Vector coords);

    const AlgebraPtr& algebra() const { return algebra_; }
    const Vector& coords() const { return coords_; }

private:
    AlgebraPtr algebra_;
    Vector coords_;
};

double pairing(const CoalgebraVector& mu, const AlgebraVector& xi);
AlgebraVector bracket(const AlgebraVector& xi, const AlgebraVector& eta);
CoalgebraVector ad_star(const AlgebraVector& xi, const CoalgebraVector& mu);

/// Orbit form <nu, [xi, eta]> evaluated on the generators of xi and eta.
double kks_form(const CoalgebraVector& nu, const AlgebraVector& xi, const AlgebraVector& eta);

/// Lie-Poisson vector field of h at mu. h is a function on g*; its gradient
/// (analytic, or central differences) is read as an element of g.
CoalgebraVector lie_poisson_vf(const ScalarFunction& h, const CoalgebraVector& mu);

// Shipped algebras.
AlgebraPtr so3();
/// se(3) = so(3) x| R^3, basis (rotations, translations); dual coords (Pi, Gamma).
AlgebraPtr se3();
/// Abelian R^n; every coordinate is registered as a Casimir.
AlgebraPtr abelian(int n);
/// g (+) h with block-diagonal structure constants; Casimirs of both factors carry over.
AlgebraPtr direct_sum(const AlgebraPtr& g, const AlgebraPtr& h);

/// Loads {"name","dim","structure_constants":[[i,j,k,v],...],"casimirs":[names]}.
/// Only c[i][j][k] with i<j needs listing; the antisymmetric partner is filled
/// in unless given explicitly. Throws ConfigError on malformed input.
AlgebraPtr algebra_from_json(const nlohmann::json& doc);

/// Built-in Casimir by name for an algebra of dimension dim:
/// "norm2" (|x_0..2|^2), "gamma_norm2" (|x_3..5|^2), "pi_dot_gamma",
/// "coord:<k>" (x_k).
Casimir builtin_casimir(const std::string& name, int dim);

/// Sampled invariant residuals for an algebra.
struct AlgebraInvariants {
    double jacobi = 0.0;
    double antisymmetry = 0.0;
    double pairing = 0.0;
    double casimir = 0.0;
    double kks_antisymmetry = 0.0;
    double kks_bilinearity = 0.0;
};

/// Jacobi over basis triples plus random-sample pairing, Casimir-invariance
/// (random cubic h) and kks residuals.
AlgebraInvariants check_invariants(const LieAlgebra& g, int samples, std::uint64_t seed);

}  // namespace chreduct
