#pragma once

#include <span>
#include <string>
#include <vector>

#include "ndtaxis/grid.hpp"

namespace ndtaxis {

enum class FaceMean { arithmetic, harmonic };

std::string to_string(FaceMean m);
FaceMean face_mean_from_string(const std::string& s);

struct ModelParams {
    double l = 2.0;         // diffusion / taxis exponent, l >= 1
    double epsilon = 0.01;  // regularization shift of u0, in (0, 1)
    double b = 1.0;         // constant of the energy functional
    FaceMean face_mean = FaceMean::arithmetic;

    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

/// (u, v) on a shared grid, the clock, and the running integral of u*v.
struct State {
    ScalarField u;
    ScalarField v;
    double t = 0.0;
    double cumulative_uv = 0.0;
};

/// u = u0 + epsilon, v = v0. Requires u0 >= 0 and v0 > 0 cellwise.
State regularize_initial(const ScalarField& u0, const ScalarField& v0, const ModelParams& params);

struct Rates {
    ScalarField du;
    ScalarField dv;
};

/// Right-hand side of the regularized system:
///   du = div(u^{l-1} v grad u) - div(u^l v grad v) + u v
///   dv = lap v - u v
/// with zero flux through every boundary face.
Rates rhs(const State& state, const ModelParams& params);

/// safety * h_min^2 / (2 dim Dmax), Dmax = max(1, max u^{l-1} v, max u^l v * max|grad v|).
double stability_dt(const State& state, const ModelParams& params, double safety);

/// Allocation-free evaluator reused by the time stepper.
class RhsKernel {
public:
    RhsKernel(const Grid& grid, const ModelParams& params);

    /// Full right-hand side.
    void evaluate(std::span<const double> u, std::span<const double> v, std::span<double> du,
                  std::span<double> dv);

    /// Flux divergences only: du_transport = div(D grad u - T grad v), lap_v = lap v.
    void transport(std::span<const double> u, std::span<const double> v, std::span<double> du_transport,
                   std::span<double> lap_v);

    double stability_dt(std::span<const double> u, std::span<const double> v, double safety);

    const Grid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }

private:
    void fill_coefficients(std::span<const double> u, std::span<const double> v);
    double mean(double a, double b) const;

    Grid grid_;
    ModelParams params_;
    std::vector<double> diff_coef_;   // u^{l-1} v per cell
    std::vector<double> taxis_coef_;  // u^l v per cell
};

/// u^e for the exponents the model uses, with fast paths for integer and
/// half-integer e.
class PowerEvaluator {
public:
    explicit PowerEvaluator(double exponent);
    double operator()(double x) const;

private:
    enum class Kind { integer, half_integer, general };
    double exponent_;
    Kind kind_;
    int whole_;
};

}  // namespace ndtaxis
