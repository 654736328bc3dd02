#pragma once

#include <functional>
#include <span>

namespace ndtaxis {

struct CgResult {
    int iterations = 0;
    double residual = 0.0;  // ||b - A x||_2 / ||b||_2 at exit
    bool converged = false;
};

using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

/// Jacobi-preconditioned conjugate gradients for a symmetric positive definite
/// operator given matrix-free. `x` holds the initial guess on entry.
CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> diagonal,
                            std::span<const double> rhs, std::span<double> x, double rel_tol,
                            int max_iterations);

}  // namespace ndtaxis
