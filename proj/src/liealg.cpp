#include "chreduct/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chreduct/errors.hpp"
#include "chreduct/polynomial.hpp"

namespace chreduct {

namespace {

constexpr double kJacobiTolerance = 1e-12;
constexpr double kCasimirTolerance = 1e-9;

int levi_civita(int a, int b, int c) {
    if (a == b || b == c || a == c) {
        return 0;
    }
    return ((a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0)) ? 1 : -1;
}

void require_same(const AlgebraPtr& a, const AlgebraPtr& b, const char* op) {
    if (a.get() != b.get() && !a->same_as(*b)) {
        throw DimensionError(std::string(op) + ": operands belong to different algebras (" + a->name() +
                             ", " + b->name() + ")");
    }
}

}  // namespace

LieAlgebra::LieAlgebra(std::string name, int dim, std::vector<double> constants,
                       std::vector<Casimir> casimirs)
    : name_(std::move(name)), dim_(dim), constants_(std::move(constants)), casimirs_(std::move(casimirs)) {}

AlgebraPtr LieAlgebra::create(std::string name, int dim, std::vector<double> structure_constants,
                              std::vector<Casimir> casimirs) {
    if (dim < 1) {
        throw DimensionError("LieAlgebra: dimension must be positive");
    }
    if (structure_constants.size() != static_cast<std::size_t>(dim * dim * dim)) {
        throw DimensionError("LieAlgebra: expected dim^3 structure constants");
    }
    AlgebraPtr g(new LieAlgebra(std::move(name), dim, std::move(structure_constants), std::move(casimirs)));
    g->validate();
    return g;
}

void LieAlgebra::validate() const {
    if (antisymmetry_residual() > 0.0) {
        throw ConfigError("LieAlgebra " + name_ + ": structure constants not antisymmetric");
    }
    const double jac = jacobi_residual();
    if (jac > kJacobiTolerance) {
        throw ConfigError("LieAlgebra " + name_ + ": Jacobi identity violated (residual " +
                          std::to_string(jac) + ")");
    }
    // {C, x_i}(mu) = <mu, [grad C, e_i]> must vanish for a Casimir.
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> normal;
    for (const auto& cas : casimirs_) {
        for (int s = 0; s < 8; ++s) {
            Vector mu(dim_);
            for (int i = 0; i < dim_; ++i) {
                mu[i] = normal(rng);
            }
            const Vector dc = cas.function.grad(mu);
            if (dc.size() != dim_) {
                throw DimensionError("Casimir " + cas.name + ": gradient length mismatch");
            }
            const Vector rate = ad_star(dc, mu);
            if (rate.cwiseAbs().maxCoeff() > kCasimirTolerance * (1.0 + mu.squaredNorm())) {
                throw ConfigError("LieAlgebra " + name_ + ": '" + cas.name + "' is not a Casimir");
            }
        }
    }
}

Vector LieAlgebra::bracket(const Vector& xi, const Vector& eta) const {
    if (xi.size() != dim_ || eta.size() != dim_) {
        throw DimensionError("bracket: length does not match algebra dimension");
    }
    Vector out = Vector::Zero(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (xi[i] == 0.0) {
            continue;
        }
        for (int j = 0; j < dim_; ++j) {
            const double w = xi[i] * eta[j];
            if (w == 0.0) {
                continue;
            }
            for (int k = 0; k < dim_; ++k) {
                out[k] += w * c(i, j, k);
            }
        }
    }
    return out;
}

Vector LieAlgebra::ad_star(const Vector& xi, const Vector& mu) const {
    if (xi.size() != dim_) {
        throw DimensionError("ad_star: length does not match algebra dimension");
    }
    return ad_star_matrix(mu) * xi;
}

Matrix LieAlgebra::ad_star_matrix(const Vector& mu) const {
    if (mu.size() != dim_) {
        throw DimensionError("ad_star: length does not match algebra dimension");
    }
    // (ad*_xi mu)_j = sum_{i,k} xi_i c_ijk mu_k
    Matrix a = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim_; ++k) {
                s += c(i, j, k) * mu[k];
            }
            a(j, i) = s;
        }
    }
    return a;
}

double LieAlgebra::jacobi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            for (int k = 0; k < dim_; ++k) {
                // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]], component m
                for (int m = 0; m < dim_; ++m) {
                    double s = 0.0;
                    for (int l = 0; l < dim_; ++l) {
                        s += c(j, k, l) * c(i, l, m) + c(k, i, l) * c(j, l, m) + c(i, j, l) * c(k, l, m);
                    }
                    worst = std::max(worst, std::abs(s));
                }
            }
        }
    }
    return worst;
}

double LieAlgebra::antisymmetry_residual() const {
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            for (int k = 0; k < dim_; ++k) {
                worst = std::max(worst, std::abs(c(i, j, k) + c(j, i, k)));
            }
        }
    }
    return worst;
}

bool LieAlgebra::same_as(const LieAlgebra& other) const {
    return name_ == other.name_ && dim_ == other.dim_ && constants_ == other.constants_;
}

AlgebraVector::AlgebraVector(AlgebraPtr algebra, Vector coords)
    : algebra_(std::move(algebra)), coords_(std::move(coords)) {
    if (coords_.size() != algebra_->dim()) {
        throw DimensionError("AlgebraVector: length " + std::to_string(coords_.size()) +
                             " does not match dim " + std::to_string(algebra_->dim()));
    }
}

CoalgebraVector::CoalgebraVector(AlgebraPtr algebra, Vector coords)
    : algebra_(std::move(algebra)), coords_(std::move(coords)) {
    if (coords_.size() != algebra_->dim()) {
        throw DimensionError("CoalgebraVector: length " + std::to_string(coords_.size()) +
                             " does not match dim " + std::to_string(algebra_->dim()));
    }
}

double pairing(const CoalgebraVector& mu, const AlgebraVector& xi) {
    require_same(mu.algebra(), xi.algebra(), "pairing");
    return mu.coords().dot(xi.coords());
}

AlgebraVector bracket(const AlgebraVector& xi, const AlgebraVector& eta) {
    require_same(xi.algebra(), eta.algebra(), "bracket");
    return {xi.algebra(), xi.algebra()->bracket(xi.coords(), eta.coords())};
}

CoalgebraVector ad_star(const AlgebraVector& xi, const CoalgebraVector& mu) {
    require_same(xi.algebra(), mu.algebra(), "ad_star");
    return {mu.algebra(), mu.algebra()->ad_star(xi.coords(), mu.coords())};
}

double kks_form(const CoalgebraVector& nu, const AlgebraVector& xi, const AlgebraVector& eta) {
    require_same(nu.algebra(), xi.algebra(), "kks_form");
    require_same(nu.algebra(), eta.algebra(), "kks_form");
    return nu.coords().dot(nu.algebra()->bracket(xi.coords(), eta.coords()));
}

CoalgebraVector lie_poisson_vf(const ScalarFunction& h, const CoalgebraVector& mu) {
    const Vector dh = h.grad(mu.coords());
    if (dh.size() != mu.coords().size()) {
        throw DimensionError("lie_poisson_vf: gradient length mismatch");
    }
    return {mu.algebra(), mu.algebra()->ad_star(dh, mu.coords())};
}

AlgebraPtr so3() {
    static const AlgebraPtr g = [] {
        std::vector<double> c(27, 0.0);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                for (int k = 0; k < 3; ++k) {
                    c[static_cast<std::size_t>((a * 3 + b) * 3 + k)] = levi_civita(a, b, k);
                }
            }
        }
        return LieAlgebra::create("so3", 3, std::move(c), {builtin_casimir("norm2", 3)});
    }();
    return g;
}

AlgebraPtr se3() {
    static const AlgebraPtr g = [] {
        const int d = 6;
        std::vector<double> c(static_cast<std::size_t>(d * d * d), 0.0);
        auto at = [&](int i, int j, int k) -> double& { return c[static_cast<std::size_t>((i * d + j) * d + k)]; };
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                for (int k = 0; k < 3; ++k) {
                    const double e = levi_civita(a, b, k);
                    at(a, b, k) = e;              // [omega1, omega2] = omega1 x omega2
                    at(a, 3 + b, 3 + k) = e;      // [omega, v] = omega x v
                    at(3 + b, a, 3 + k) = -e;
                }
            }
        }
        return LieAlgebra::create("se3", d, std::move(c),
                                  {builtin_casimir("gamma_norm2", d), builtin_casimir("pi_dot_gamma", d)});
    }();
    return g;
}

AlgebraPtr abelian(int n) {
    if (n < 1) {
        throw DimensionError("abelian: dimension must be positive");
    }
    std::vector<Casimir> cas;
    for (int k = 0; k < n; ++k) {
        cas.push_back(builtin_casimir("coord:" + std::to_string(k), n));
    }
    return LieAlgebra::create("R" + std::to_string(n), n, std::vector<double>(static_cast<std::size_t>(n * n * n), 0.0),
                              std::move(cas));
}

AlgebraPtr direct_sum(const AlgebraPtr& g, const AlgebraPtr& h) {
    const int dg = g->dim();
    const int d = dg + h->dim();
    std::vector<double> c(static_cast<std::size_t>(d * d * d), 0.0);
    auto at = [&](int i, int j, int k) -> double& { return c[static_cast<std::size_t>((i * d + j) * d + k)]; };
    for (int i = 0; i < dg; ++i) {
        for (int j = 0; j < dg; ++j) {
            for (int k = 0; k < dg; ++k) {
                at(i, j, k) = g->c(i, j, k);
            }
        }
    }
    for (int i = 0; i < h->dim(); ++i) {
        for (int j = 0; j < h->dim(); ++j) {
            for (int k = 0; k < h->dim(); ++k) {
                at(dg + i, dg + j, dg + k) = h->c(i, j, k);
            }
        }
    }
    auto lift = [d](const Casimir& cas, int offset, int len) {
        const ScalarFunction f = cas.function;
        return Casimir{cas.name + "@" + std::to_string(offset),
                       ScalarFunction([f, offset, len](const Vector& x) { return f(x.segment(offset, len)); },
                                      [f, offset, len, d](const Vector& x) {
                                          Vector grad = Vector::Zero(d);
                                          grad.segment(offset, len) = f.grad(x.segment(offset, len));
                                          return grad;
                                      })};
    };
    std::vector<Casimir> cas;
    for (const auto& k : g->casimirs()) {
        cas.push_back(lift(k, 0, dg));
    }
    for (const auto& k : h->casimirs()) {
        cas.push_back(lift(k, dg, h->dim()));
    }
    return LieAlgebra::create(g->name() + "+" + h->name(), d, std::move(c), std::move(cas));
}

Casimir builtin_casimir(const std::string& name, int dim) {
    auto unit = [dim](int k) {
        Vector e = Vector::Zero(dim);
        e[k] = 1.0;
        return e;
    };
    if (name == "norm2" && dim >= 3) {
        return {name, ScalarFunction([](const Vector& x) { return x.head<3>().squaredNorm(); },
                                     [dim](const Vector& x) {
                                         Vector g = Vector::Zero(dim);
                                         g.head<3>() = 2.0 * x.head<3>();
                                         return g;
                                     })};
    }
    if (name == "gamma_norm2" && dim >= 6) {
        return {name, ScalarFunction([](const Vector& x) { return x.segment<3>(3).squaredNorm(); },
                                     [dim](const Vector& x) {
                                         Vector g = Vector::Zero(dim);
                                         g.segment<3>(3) = 2.0 * x.segment<3>(3);
                                         return g;
                                     })};
    }
    if (name == "pi_dot_gamma" && dim >= 6) {
        return {name, ScalarFunction([](const Vector& x) { return x.head<3>().dot(x.segment<3>(3)); },
                                     [dim](const Vector& x) {
                                         Vector g = Vector::Zero(dim);
                                         g.head<3>() = x.segment<3>(3);
                                         g.segment<3>(3) = x.head<3>();
                                         return g;
                                     })};
    }
    if (name.rfind("coord:", 0) == 0) {
        int k = -1;
        try {
            k = std::stoi(name.substr(6));
        } catch (const std::exception&) {
            k = -1;
        }
        if (k >= 0 && k < dim) {
            const Vector e = unit(k);
            return {name, ScalarFunction([k](const Vector& x) { return x[k]; }, [e](const Vector&) { return e; })};
        }
    }
    throw UnknownNameError("unknown Casimir '" + name + "' for dimension " + std::to_string(dim) +
                           " (known: norm2, gamma_norm2, pi_dot_gamma, coord:<k>)");
}

AlgebraPtr algebra_from_json(const nlohmann::json& doc) {
    try {
        const std::string name = doc.at("name").get<std::string>();
        const int dim = doc.at("dim").get<int>();
        if (dim < 1) {
            throw ConfigError("algebra JSON: dim must be positive");
        }
        std::vector<double> c(static_cast<std::size_t>(dim * dim * dim), 0.0);
        std::vector<char> given(c.size(), 0);
        auto idx = [dim](int i, int j, int k) { return static_cast<std::size_t>((i * dim + j) * dim + k); };
        for (const auto& t : doc.at("structure_constants")) {
            if (!t.is_array() || t.size() != 4) {
                throw ConfigError("algebra JSON: structure constants must be [i,j,k,value] quadruples");
            }
            const int i = t[0].get<int>();
            const int j = t[1].get<int>();
            const int k = t[2].get<int>();
            const double v = t[3].get<double>();
            if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim) {
                throw ConfigError("algebra JSON: structure-constant index out of range");
            }
            c[idx(i, j, k)] = v;
            given[idx(i, j, k)] = 1;
            if (!given[idx(j, i, k)]) {
                c[idx(j, i, k)] = -v;
            }
        }
        std::vector<Casimir> cas;
        if (doc.contains("casimirs")) {
            for (const auto& n : doc.at("casimirs")) {
                cas.push_back(builtin_casimir(n.get<std::string>(), dim));
            }
        }
        return LieAlgebra::create(name, dim, std::move(c), std::move(cas));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("algebra JSON: ") + e.what());
    }
}

AlgebraInvariants check_invariants(const LieAlgebra& g, int samples, std::uint64_t seed) {
    AlgebraInvariants out;
    out.jacobi = g.jacobi_residual();
    out.antisymmetry = g.antisymmetry_residual();
    const int d = g.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto rand_vec = [&] {
        Vector v(d);
        for (int i = 0; i < d; ++i) {
            v[i] = normal(rng);
        }
        return v;
    };
    for (int s = 0; s < samples; ++s) {
        const Vector xi = rand_vec();
        const Vector eta = rand_vec();
        const Vector zeta = rand_vec();
        const Vector mu = rand_vec();
        const Vector nu = rand_vec();
        const double a = normal(rng);
        const double b = normal(rng);

        out.pairing = std::max(out.pairing, std::abs(g.ad_star(xi, mu).dot(eta) - mu.dot(g.bracket(xi, eta))));

        auto kks = [&](const Vector& n, const Vector& x, const Vector& y) { return n.dot(g.bracket(x, y)); };
        out.kks_antisymmetry = std::max(out.kks_antisymmetry, std::abs(kks(mu, xi, eta) + kks(mu, eta, xi)));
        const double lin_xi = kks(mu, a * xi + b * zeta, eta) - a * kks(mu, xi, eta) - b * kks(mu, zeta, eta);
        const double lin_nu = kks(a * mu + b * nu, xi, eta) - a * kks(mu, xi, eta) - b * kks(nu, xi, eta);
        out.kks_bilinearity = std::max({out.kks_bilinearity, std::abs(lin_xi), std::abs(lin_nu)});

        // random cubic Hamiltonian on g*
        Polynomial h(d);
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                Polynomial::Exponents e(static_cast<std::size_t>(d), 0);
                e[static_cast<std::size_t>(i)] += 1;
                e[static_cast<std::size_t>(j)] += 1;
                h.add_term(e, normal(rng));
                Polynomial::Exponents e3 = e;
                e3[static_cast<std::size_t>((i + j) % d)] += 1;
                h.add_term(e3, 0.1 * normal(rng));
            }
        }
        const Vector flow = g.ad_star(h.gradient(mu), mu);
        for (const auto& cas : g.casimirs()) {
            out.casimir = std::max(out.casimir, std::abs(cas.function.grad(mu).dot(flow)));
        }
    }
    return out;
}

}  // namespace chreduct
