#include "chreduct/numdiff.hpp"

#include <algorithm>
#include <string>

#include "chreduct/errors.hpp"

namespace chreduct {

double difference_step(const Vector& x) {
    return kFiniteDifferenceStep * std::max(1.0, x.norm());
}

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) {
        throw GradientError(std::string(what) + ": non-finite value");
    }
}

Vector fd_gradient(const ScalarMap& f, const Vector& x) {
    const double h = difference_step(x);
    Vector g(x.size());
    Vector xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    require_finite(g, "finite-difference gradient");
    return g;
}

Matrix fd_jacobian(const VectorMap& f, const Vector& x) {
    const double h = difference_step(x);
    Vector xp = x;
    Matrix jac;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        const Vector fp = f(xp);
        xp[i] = x[i] - h;
        const Vector fm = f(xp);
        xp[i] = x[i];
        if (i == 0) {
            jac.resize(fp.size(), x.size());
        }
        jac.col(i) = (fp - fm) / (2.0 * h);
    }
    if (!jac.allFinite()) {
        throw GradientError("finite-difference Jacobian: non-finite value");
    }
    return jac;
}

Vector ScalarFunction::grad(const Vector& x) const {
    if (gradient) {
        Vector g = gradient(x);
        require_finite(g, "analytic gradient");
        return g;
    }
    return fd_gradient(value, x);
}

}  // namespace chreduct
