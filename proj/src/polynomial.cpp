#include "chreduct/polynomial.hpp"

#include <cmath>
#include <numeric>

#include "chreduct/errors.hpp"

namespace chreduct {

Polynomial::Polynomial(int nvars) : nvars_(nvars) {}

Polynomial Polynomial::constant(int nvars, double c) {
    Polynomial p(nvars);
    p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
    Polynomial p(nvars);
    Exponents e(static_cast<std::size_t>(nvars), 0);
    e.at(static_cast<std::size_t>(i)) = 1;
    p.add_term(e, 1.0);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    }
    return d;
}

void Polynomial::add_term(const Exponents& e, double coef) {
    if (static_cast<int>(e.size()) != nvars_) {
        throw DimensionError("Polynomial: exponent length mismatch");
    }
    if (coef == 0.0) {
        return;
    }
    auto [it, inserted] = terms_.emplace(e, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0.0) {
            terms_.erase(it);
        }
    }
}

double Polynomial::operator()(const Vector& x) const {
    if (x.size() != nvars_) {
        throw DimensionError("Polynomial: argument length mismatch");
    }
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int i = 0; i < nvars_; ++i) {
            for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) {
                t *= x[i];
            }
        }
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial d(nvars_);
    for (const auto& [e, c] : terms_) {
        const int k = e.at(static_cast<std::size_t>(i));
        if (k == 0) {
            continue;
        }
        Exponents de = e;
        de[static_cast<std::size_t>(i)] = k - 1;
        d.add_term(de, c * k);
    }
    return d;
}

Vector Polynomial::gradient(const Vector& x) const {
    Vector g(nvars_);
    for (int i = 0; i < nvars_; ++i) {
        g[i] = derivative(i)(x);
    }
    return g;
}

Polynomial Polynomial::embed(int nvars, int offset) const {
    if (offset < 0 || offset + nvars_ > nvars) {
        throw DimensionError("Polynomial::embed: target too small");
    }
    Polynomial out(nvars);
    for (const auto& [e, c] : terms_) {
        Exponents ne(static_cast<std::size_t>(nvars), 0);
        std::copy(e.begin(), e.end(), ne.begin() + offset);
        out.add_term(ne, c);
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (o.nvars_ != nvars_) {
        throw DimensionError("Polynomial: variable count mismatch");
    }
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) {
        r.add_term(e, c);
    }
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (o.nvars_ != nvars_) {
        throw DimensionError("Polynomial: variable count mismatch");
    }
    Polynomial r(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(ea.size());
            for (std::size_t i = 0; i < ea.size(); ++i) {
                e[i] = ea[i] + eb[i];
            }
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        r.add_term(e, c * s);
    }
    return r;
}

ScalarFunction Polynomial::as_function() const {
    std::vector<Polynomial> partials;
    for (int i = 0; i < nvars_; ++i) {
        partials.push_back(derivative(i));
    }
    auto self = *this;
    return ScalarFunction(
        [self](const Vector& x) { return self(x); },
        [partials](const Vector& x) {
            Vector g(static_cast<Eigen::Index>(partials.size()));
            for (std::size_t i = 0; i < partials.size(); ++i) {
                g[static_cast<Eigen::Index>(i)] = partials[i](x);
            }
            return g;
        });
}

}  // namespace chreduct
