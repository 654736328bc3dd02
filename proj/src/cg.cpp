#include "ndtaxis/cg.hpp"

#include <cmath>
#include <vector>

namespace ndtaxis {

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}
}  // namespace

CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> diagonal,
                            std::span<const double> rhs, std::span<double> x, double rel_tol,
                            int max_iterations) {
    const std::size_t n = rhs.size();
    std::vector<double> r(n), z(n), p(n), q(n);
    apply(x, r);
    for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - r[k];

    const double b_norm = std::sqrt(dot(rhs, rhs));
    const double scale = b_norm > 0.0 ? b_norm : 1.0;
    CgResult result;
    result.residual = std::sqrt(dot(r, r)) / scale;
    if (result.residual <= rel_tol) {
        result.converged = true;
        return result;
    }

    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diagonal[k];
    p = z;
    double rz = dot(r, z);
    for (int it = 1; it <= max_iterations; ++it) {
        apply(p, q);
        const double alpha = rz / dot(p, q);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        result.iterations = it;
        result.residual = std::sqrt(dot(r, r)) / scale;
        if (result.residual <= rel_tol) {
            result.converged = true;
            return result;
        }
        for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diagonal[k];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    return result;
}

}  // namespace ndtaxis
