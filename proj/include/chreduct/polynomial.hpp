#pragma once

#include <map>
#include <vector>

#include "chreduct/numdiff.hpp"

namespace chreduct {

/// Sparse multivariate polynomial with real coefficients.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(int nvars = 0);

    static Polynomial constant(int nvars, double c);
    /// The coordinate function x_i.
    static Polynomial variable(int nvars, int i);

    int nvars() const { return nvars_; }
    int degree() const;
    const std::map<Exponents, double>& terms() const { return terms_; }

    void add_term(const Exponents& e, double coef);

    double operator()(const Vector& x) const;
    Polynomial derivative(int i) const;
    Vector gradient(const Vector& x) const;

    /// Polynomial in more variables: variable i of *this becomes variable offset+i.
    Polynomial embed(int nvars, int offset) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double s) const;

    ScalarFunction as_function() const;

private:
    int nvars_;
    std::map<Exponents, double> terms_;
};

}  // namespace chreduct
