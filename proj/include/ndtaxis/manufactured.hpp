#pragma once

#include <cstdint>

#include "ndtaxis/stepper.hpp"

namespace ndtaxis {

/// Exact solution of the forced system on a rectangle:
///   u* = 2 + C e^{-t},  v* = 2 + C e^{-t} / 2,  C = cos(pi x / Lx) [cos(pi y / Ly)]
/// with sources f_u, f_v derived by hand from the strong form.
class Manufactured {
public:
    Manufactured(const Domain& domain, const ModelParams& params);

    double u(double x, double y, double t) const;
    double v(double x, double y, double t) const;
    void sources(double x, double y, double t, double& fu, double& fv) const;

    ScalarField u_field(const Grid& grid, double t) const;
    ScalarField v_field(const Grid& grid, double t) const;
    State exact_state(const Grid& grid, double t) const;

    /// Cell-center sources for the stepper.
    Forcing forcing(const Grid& grid) const;

    const Domain& domain() const { return domain_; }
    const ModelParams& params() const { return params_; }

private:
    Domain domain_;
    ModelParams params_;
};

/// Largest |residual| of u*, v* in the strong form with the hand sources,
/// over `points` seeded random (x, y, t) with t in [0, 1]. Every derivative
/// is taken by forward-mode automatic differentiation, independently of
/// Manufactured::sources.
double manufactured_residual(const Manufactured& m, int points, std::uint64_t seed);

}  // namespace ndtaxis
