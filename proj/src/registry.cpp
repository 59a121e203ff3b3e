#include "chreduct/registry.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "chreduct/errors.hpp"
#include "chreduct/polynomial.hpp"
#include "chreduct/sampling.hpp"

namespace chreduct {

namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        out += (out.empty() ? "" : ", ") + n;
    }
    return out;
}

Vector json_vector(const json& j, const char* key) {
    try {
        const auto v = j.at(key).get<std::vector<double>>();
        return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("parameter '") + key + "': " + e.what());
    }
}

Vector vector_or(const json& params, const char* key, const Vector& fallback) {
    return params.contains(key) ? json_vector(params, key) : fallback;
}

double number_or(const json& params, const char* key, double fallback) {
    if (!params.contains(key)) {
        return fallback;
    }
    const json& v = params.at(key);
    if (v.is_array() && v.size() == 1 && v[0].is_number()) {
        return v[0].get<double>();
    }
    if (!v.is_number()) {
        throw ConfigError(std::string("parameter '") + key + "' must be a number");
    }
    return v.get<double>();
}

Eigen::Vector3d vec3(const Vector& v, const char* what) {
    if (v.size() != 3) {
        throw ConfigError(std::string(what) + " needs 3 entries");
    }
    return v;
}

RotorParams rotor_params(const json& params) {
    const Vector j = vector_or(params, "J", Vector::Constant(3, 0.5));
    RotorParams r = RotorParams::principal(j);
    if (j.size() > 3) {
        throw ConfigError("rotors: at most 3 rotors");
    }
    if (params.contains("axes")) {
        try {
            const auto rows = params.at("axes").get<std::vector<std::vector<double>>>();
            if (static_cast<Eigen::Index>(rows.size()) != j.size()) {
                throw ConfigError("rotors: need one axis per rotor");
            }
            for (std::size_t c = 0; c < rows.size(); ++c) {
                if (rows[c].size() != 3) {
                    throw ConfigError("rotors: axes must have 3 components");
                }
                for (int i = 0; i < 3; ++i) {
                    r.axes(i, static_cast<Eigen::Index>(c)) = rows[c][static_cast<std::size_t>(i)];
                }
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("parameter 'axes': ") + e.what());
        }
    }
    r.validate();
    return r;
}

Polynomial polynomial_from_json(const json& params, int nvars) {
    Polynomial p(nvars);
    try {
        for (const auto& t : params.at("terms")) {
            const auto v = t.get<std::vector<double>>();
            if (static_cast<int>(v.size()) != nvars + 1) {
                throw ConfigError("polynomial term must be [coef, e_1, ..., e_n]");
            }
            Polynomial::Exponents e;
            for (std::size_t i = 1; i < v.size(); ++i) {
                e.push_back(static_cast<int>(v[i]));
            }
            p.add_term(e, v[0]);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("polynomial: ") + e.what());
    }
    return p;
}

}  // namespace

const std::vector<std::string>& system_names() {
    static const std::vector<std::string> names = {"rigid-body", "heavy-top", "rigid-body-rotors",
                                                   "heavy-top-rotors"};
    return names;
}

ReducedSystem make_system(const std::string& name, const json& params) {
    const json p = params.is_null() ? json::object() : params;
    const Eigen::Vector3d inertia = vec3(vector_or(p, "I", Eigen::Vector3d(1.0, 2.0, 3.0)), "I");
    if (name == "rigid-body") {
        return free_rigid_body(RigidBodyParams{inertia});
    }
    if (name == "heavy-top" || name == "heavy-top-rotors") {
        HeavyTopParams hp;
        hp.inertia = inertia;
        hp.mgl = number_or(p, "mgl", 1.0);
        hp.chi = vec3(vector_or(p, "chi", Eigen::Vector3d(0.0, 0.0, 1.0)), "chi");
        return name == "heavy-top" ? heavy_top(hp) : heavy_top_with_rotors(hp, rotor_params(p));
    }
    if (name == "rigid-body-rotors") {
        return rigid_body_with_rotors(RigidBodyParams{inertia}, rotor_params(p));
    }
    throw UnknownNameError("unknown system '" + name + "' (registry: " + join(system_names()) + ")");
}

Vector parse_reals(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw ConfigError("");
            }
        } catch (const std::exception&) {
            throw ConfigError("cannot parse '" + text + "' as a list of numbers");
        }
    }
    if (values.empty()) {
        throw ConfigError("empty number list");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json parse_assignments(const std::vector<std::string>& assignments) {
    json out = json::object();
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("parameter '" + a + "' is not of the form key=value");
        }
        const std::string key = a.substr(0, eq);
        const Vector v = parse_reals(a.substr(eq + 1));
        if (a.find(',', eq) == std::string::npos) {
            out[key] = v[0];
        } else {
            out[key] = std::vector<double>(v.data(), v.data() + v.size());
        }
    }
    return out;
}

ScalarFunction hj_hamiltonian(const std::string& name, const json& params, int n) {
    const json p = params.is_null() ? json::object() : params;
    if (name == "free-particle") {
        return ScalarFunction([n](const Vector& z) { return 0.5 * z.tail(n).squaredNorm(); },
                              [n](const Vector& z) {
                                  Vector g = Vector::Zero(2 * n);
                                  g.tail(n) = z.tail(n);
                                  return g;
                              });
    }
    if (name == "oscillator") {
        const double w2 = std::pow(number_or(p, "omega", 1.0), 2);
        return ScalarFunction(
            [n, w2](const Vector& z) { return 0.5 * (z.tail(n).squaredNorm() + w2 * z.head(n).squaredNorm()); },
            [n, w2](const Vector& z) {
                Vector g(2 * n);
                g << w2 * z.head(n), z.tail(n);
                return g;
            });
    }
    if (name == "polynomial") {
        return polynomial_from_json(p, 2 * n).as_function();
    }
    throw UnknownNameError("unknown Hamiltonian '" + name + "' (registry: free-particle, oscillator, polynomial)");
}

GeneratingFunction hj_generating_function(const std::string& name, const json& params, int n) {
    const json p = params.is_null() ? json::object() : params;
    if (name == "linear") {
        const Vector c = vector_or(p, "c", Vector::Ones(n));
        if (c.size() != n) {
            throw ConfigError("linear W: c must have one entry per configuration variable");
        }
        return {ScalarFunction([c](const Vector& q) { return c.dot(q); }, [c](const Vector&) { return c; })};
    }
    if (name == "quadratic") {
        const double a = number_or(p, "a", 1.0);
        return {ScalarFunction([a](const Vector& q) { return a * q.squaredNorm(); },
                               [a](const Vector& q) { return Vector(2.0 * a * q); })};
    }
    if (name == "oscillator-exact") {
        if (n != 1) {
            throw ConfigError("oscillator-exact W is one-dimensional");
        }
        const double eps = number_or(p, "eps", 0.0);
        return {ScalarFunction(
            [eps](const Vector& q) {
                const double x = q[0];
                return 0.5 * (x * std::sqrt(1.0 - x * x) + std::asin(x)) + eps * x * x * x;
            },
            [eps](const Vector& q) {
                const double x = q[0];
                return Vector::Constant(1, std::sqrt(1.0 - x * x) + 3.0 * eps * x * x);
            })};
    }
    if (name == "polynomial") {
        return {polynomial_from_json(p, n).as_function()};
    }
    throw UnknownNameError("unknown generating function '" + name +
                           "' (registry: linear, quadratic, oscillator-exact, polynomial)");
}

HjCase hj_case_from_json(const json& doc, const std::string& name) {
    try {
        HjCase c;
        c.name = doc.value("name", name);
        c.box.lower = json_vector(doc.at("domain"), "lower");
        c.box.upper = json_vector(doc.at("domain"), "upper");
        const int n = static_cast<int>(c.box.lower.size());
        if (n < 1 || c.box.upper.size() != n || (c.box.upper.array() <= c.box.lower.array()).any()) {
            throw ConfigError("case '" + c.name + "': malformed domain box");
        }
        const json& h = doc.at("hamiltonian");
        const json& w = doc.at("W");
        c.hamiltonian = hj_hamiltonian(h.at("name").get<std::string>(), h.value("params", json::object()), n);
        c.w = hj_generating_function(w.at("name").get<std::string>(), w.value("params", json::object()), n);
        const std::string expected = doc.at("expected").get<std::string>();
        if (expected != "solution" && expected != "non-solution") {
            throw ConfigError("case '" + c.name + "': expected must be solution or non-solution");
        }
        c.expected_solution = expected == "solution";
        c.q0 = doc.contains("q0") ? json_vector(doc, "q0") : Vector(0.5 * (c.box.lower + c.box.upper));
        if (c.q0.size() != n) {
            throw ConfigError("case '" + c.name + "': q0 has the wrong length");
        }
        c.t_end = doc.value("t_end", 0.5);
        c.dt = doc.value("dt", 1e-4);
        if (!(c.t_end > 0.0) || !(c.dt > 0.0)) {
            throw ConfigError("case '" + c.name + "': t_end and dt must be positive");
        }
        c.residual_points = grid_points(c.box, doc.value("grid", 21));
        return c;
    } catch (const json::exception& e) {
        throw ConfigError("case '" + name + "': " + e.what());
    }
}

std::vector<HjCase> shipped_hj_cases() {
    auto one = [](double v) { return Vector::Constant(1, v); };
    std::vector<HjCase> cases;
    auto oscillator_case = [&](const std::string& name, GeneratingFunction w, bool solution) {
        HjCase c;
        c.name = name;
        c.hamiltonian = hj_hamiltonian("oscillator", json::object(), 1);
        c.w = std::move(w);
        c.box = {one(-0.9), one(0.9)};
        c.residual_points = grid_points(c.box, 37);
        c.q0 = one(0.5);
        c.t_end = 0.5;
        c.dt = 1e-4;
        c.expected_solution = solution;
        return c;
    };
    cases.push_back(oscillator_case("oscillator-exact", hj_generating_function("oscillator-exact", {}, 1), true));
    cases.push_back(oscillator_case("oscillator-quadratic", hj_generating_function("quadratic", {{"a", 1.0}}, 1), false));
    cases.push_back(oscillator_case("oscillator-cubic-0", hj_generating_function("oscillator-exact", {{"eps", 0.0}}, 1), true));
    cases.push_back(
        oscillator_case("oscillator-cubic-1e-2", hj_generating_function("oscillator-exact", {{"eps", 1e-2}}, 1), false));

    HjCase free;
    free.name = "free-particle";
    free.hamiltonian = hj_hamiltonian("free-particle", json::object(), 1);
    free.w = hj_generating_function("linear", {{"c", {1.5}}}, 1);
    free.box = {one(-2.0), one(2.0)};
    free.residual_points = grid_points(free.box, 21);
    free.q0 = one(0.0);
    free.t_end = 0.5;
    free.dt = 1e-4;
    free.expected_solution = true;
    cases.push_back(std::move(free));
    return cases;
}

HjCase random_hj_case(int n, bool solution, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 0.3);
    std::uniform_real_distribution<double> start(-0.3, 0.3);

    // random W with total degree <= 3
    Polynomial w(n);
    Polynomial::Exponents e(static_cast<std::size_t>(n), 0);
    const auto visit = [&](auto&& self, int var, int remaining) -> void {
        if (var == n) {
            if (std::accumulate(e.begin(), e.end(), 0) > 0) {
                w.add_term(e, normal(rng));
            }
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            e[static_cast<std::size_t>(var)] = k;
            self(self, var + 1, remaining - k);
        }
        e[static_cast<std::size_t>(var)] = 0;
    };
    visit(visit, 0, 3);

    const int m = 2 * n;
    const double energy = 0.5 + normal(rng);
    Polynomial h = Polynomial::constant(m, energy);
    for (int i = 0; i < n; ++i) {
        const Polynomial p = Polynomial::variable(m, n + i);
        const Polynomial dw = w.derivative(i).embed(m, 0);
        h = h + p * p * 0.5 - dw * dw * 0.5;
    }
    if (!solution) {
        for (int i = 0; i < n; ++i) {
            h = h + Polynomial::variable(m, i) * (0.2 + std::abs(normal(rng)));
        }
    }

    HjCase c;
    c.name = std::string(solution ? "random-solution-" : "random-non-solution-") + std::to_string(seed);
    c.hamiltonian = h.as_function();
    c.w = {w.as_function()};
    c.box = {Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)};
    c.residual_points = grid_points(c.box, n == 1 ? 21 : (n == 2 ? 9 : 5));
    c.q0 = Vector(n);
    for (int i = 0; i < n; ++i) {
        c.q0[i] = start(rng);
    }
    c.t_end = 0.25;
    c.dt = 1e-4;
    c.expected_solution = solution;
    return c;
}

EquivalencePair rescaled_oscillator_pair(double force1, bool full_control, int n_samples, std::uint64_t seed) {
    const ScalarFunction h1 = hj_hamiltonian("oscillator", json::object(), 1);
    // H2(q, p) = H1(q/2, 2p)
    const ScalarFunction h2([](const Vector& z) { return 0.5 * (z[0] * z[0] / 4.0 + 4.0 * z[1] * z[1]); },
                            [](const Vector& z) {
                                Vector g(2);
                                g << z[0] / 4.0, 4.0 * z[1];
                                return g;
                            });
    const ControlSubset w = full_control ? ControlSubset::full(1) : ControlSubset::none(1);
    std::optional<FiberMap> f1;
    if (force1 != 0.0) {
        f1 = FiberMap::affine(Matrix::Zero(1, 1), Matrix::Constant(1, 1, force1), Vector::Zero(1));
    }
    EquivalencePair pair{force1 != 0.0 ? "rescaled-oscillator-forced" : "rescaled-oscillator",
                         RCHSystem(PhaseSpaceChart(1, "oscillator"), h1, f1, w),
                         RCHSystem(PhaseSpaceChart(1, "rescaled-oscillator"), h2, std::nullopt, w),
                         ConfigDiffeo::scaling(2.0),
                         full_control ? ControlLaw::vertical([](const PhasePoint& z) { return Vector(-z.p()); })
                                      : ControlLaw::zero(),
                         {}};
    for (const auto& x : sample_box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0), n_samples, seed)) {
        pair.samples.push_back(PhasePoint::from_flat(x));
    }
    return pair;
}

EquivalencePair random_linear_pair(int n, std::uint64_t seed, int n_samples) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto random_matrix = [&](Eigen::Index r, Eigen::Index c, double scale) {
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < c; ++j) {
                m(i, j) = scale * normal(rng);
            }
        }
        return m;
    };
    const Matrix a = Matrix::Identity(n, n) + random_matrix(n, n, 0.3);
    const ConfigDiffeo phi = ConfigDiffeo::linear(a);

    const Matrix b = random_matrix(2 * n, 2 * n, 0.5);
    const Matrix s2 = b.transpose() * b + Matrix::Identity(2 * n, 2 * n);
    // H1 = H2 o phi_*, phi_*(q, p) = (A q, A^{-T} p)
    Matrix t = Matrix::Zero(2 * n, 2 * n);
    t.topLeftCorner(n, n) = a;
    t.bottomRightCorner(n, n) = a.inverse().transpose();
    const Matrix s1 = t.transpose() * s2 * t;

    auto quadratic = [](const Matrix& s) {
        return ScalarFunction([s](const Vector& z) { return 0.5 * z.dot(s * z); },
                              [s](const Vector& z) { return Vector(s * z); });
    };
    const FiberMap f1 = FiberMap::affine(random_matrix(n, n, 0.3), random_matrix(n, n, 0.3), random_matrix(n, 1, 0.3));
    const FiberMap f2 = FiberMap::affine(random_matrix(n, n, 0.3), random_matrix(n, n, 0.3), random_matrix(n, 1, 0.3));
    const Matrix k2 = random_matrix(n, n, 0.3);
    const Matrix l2 = random_matrix(n, n, 0.3);

    EquivalencePair pair{"random-linear-" + std::to_string(seed),
                         RCHSystem(PhaseSpaceChart(n, "random-1"), quadratic(s1), f1, ControlSubset::full(n)),
                         RCHSystem(PhaseSpaceChart(n, "random-2"), quadratic(s2), f2, ControlSubset::full(n)),
                         phi,
                         ControlLaw::vertical([k2, l2](const PhasePoint& z) { return Vector(k2 * z.p() + l2 * z.q()); }),
                         {}};
    for (const auto& x : sample_box(Vector::Constant(2 * n, -1.0), Vector::Constant(2 * n, 1.0), n_samples, seed)) {
        pair.samples.push_back(PhasePoint::from_flat(x));
    }
    return pair;
}

const std::vector<std::string>& pair_names() {
    static const std::vector<std::string> names = {"rescaled-oscillator", "rescaled-oscillator-forced",
                                                   "random-linear"};
    return names;
}

EquivalencePair make_pair(const std::string& name, const json& params, std::uint64_t seed, int n_samples) {
    const json p = params.is_null() ? json::object() : params;
    if (name == "rescaled-oscillator") {
        return rescaled_oscillator_pair(0.0, true, n_samples, seed);
    }
    if (name == "rescaled-oscillator-forced") {
        return rescaled_oscillator_pair(number_or(p, "force", 0.3), false, n_samples, seed);
    }
    if (name == "random-linear") {
        const int n = static_cast<int>(number_or(p, "n", 2.0));
        if (n < 1 || n > 8) {
            throw ConfigError("random-linear: n must be in [1, 8]");
        }
        return random_linear_pair(n, seed, n_samples);
    }
    throw UnknownNameError("unknown pair '" + name + "' (registry: " + join(pair_names()) + ")");
}

}  // namespace chreduct
