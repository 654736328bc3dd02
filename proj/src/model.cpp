#include "ndtaxis/model.hpp"

#include <algorithm>
#include <cmath>

#include "ndtaxis/errors.hpp"
#include "ndtaxis/format.hpp"

namespace ndtaxis {

std::string to_string(FaceMean m) { return m == FaceMean::arithmetic ? "arithmetic" : "harmonic"; }

FaceMean face_mean_from_string(const std::string& s) {
    if (s == "arithmetic") return FaceMean::arithmetic;
    if (s == "harmonic") return FaceMean::harmonic;
    throw InvalidArgument("face_mean must be 'arithmetic' or 'harmonic', got '" + s + "'");
}

void ModelParams::validate() const {
    if (!(l >= 1.0) || !std::isfinite(l)) throw InvalidArgument("model.l must be >= 1, got " + format_number(l));
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidArgument("model.epsilon must lie in (0, 1), got " + format_number(epsilon));
    }
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("model.b must be > 0, got " + format_number(b));
}

State regularize_initial(const ScalarField& u0, const ScalarField& v0, const ModelParams& params) {
    params.validate();
    if (!(u0.grid() == v0.grid())) throw InvalidArgument("u0 and v0 live on different grids");
    std::vector<double> u(u0.values().begin(), u0.values().end());
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!(u[k] >= 0.0) || !std::isfinite(u[k])) {
            throw InvalidInitialData("invalid initial data: u0 = " + format_number(u[k]) + " < 0 at cell " +
                                         std::to_string(k),
                                     k);
        }
        u[k] += params.epsilon;
    }
    for (std::size_t k = 0; k < v0.size(); ++k) {
        if (!(v0[k] > 0.0) || !std::isfinite(v0[k])) {
            throw InvalidInitialData("invalid initial data: v0 = " + format_number(v0[k]) + " <= 0 at cell " +
                                         std::to_string(k),
                                     k);
        }
    }
    return State{ScalarField(u0.grid(), std::move(u)), v0, 0.0, 0.0};
}

PowerEvaluator::PowerEvaluator(double exponent) : exponent_(exponent), kind_(Kind::general), whole_(0) {
    const double twice = 2.0 * exponent;
    if (exponent >= 0.0 && exponent <= 16.0 && twice == std::floor(twice)) {
        whole_ = static_cast<int>(std::floor(exponent));
        kind_ = (exponent == whole_) ? Kind::integer : Kind::half_integer;
    }
}

double PowerEvaluator::operator()(double x) const {
    switch (kind_) {
        case Kind::integer:
        case Kind::half_integer: {
            double r = kind_ == Kind::half_integer ? std::sqrt(x) : 1.0;
            for (int k = 0; k < whole_; ++k) r *= x;
            return r;
        }
        case Kind::general:
            break;
    }
    return std::pow(x, exponent_);
}

RhsKernel::RhsKernel(const Grid& grid, const ModelParams& params)
    : grid_(grid), params_(params), diff_coef_(grid.size()), taxis_coef_(grid.size()) {}

double RhsKernel::mean(double a, double b) const {
    if (params_.face_mean == FaceMean::arithmetic) return 0.5 * (a + b);
    const double s = a + b;
    return s > 0.0 ? 2.0 * a * b / s : 0.0;
}

void RhsKernel::fill_coefficients(std::span<const double> u, std::span<const double> v) {
    const PowerEvaluator pow_lm1(params_.l - 1.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double a = pow_lm1(u[k]) * v[k];
        diff_coef_[k] = a;
        taxis_coef_[k] = a * u[k];
    }
}

void RhsKernel::transport(std::span<const double> u, std::span<const double> v, std::span<double> du,
                          std::span<double> lap_v) {
    fill_coefficients(u, v);
    std::fill(du.begin(), du.end(), 0.0);
    std::fill(lap_v.begin(), lap_v.end(), 0.0);
    const int nx = grid_.n(0);
    const int ny = grid_.n(1);

    auto face = [&](std::size_t left, std::size_t right, double inv_h) {
        const double gu = (u[right] - u[left]) * inv_h;
        const double gv = (v[right] - v[left]) * inv_h;
        const double flux_u = mean(diff_coef_[left], diff_coef_[right]) * gu -
                              mean(taxis_coef_[left], taxis_coef_[right]) * gv;
        const double fu = flux_u * inv_h;
        const double fv = gv * inv_h;
        du[left] += fu;
        du[right] -= fu;
        lap_v[left] += fv;
        lap_v[right] -= fv;
    };

    const double inv_hx = 1.0 / grid_.h(0);
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
        for (int i = 1; i < nx; ++i) face(row + i - 1, row + i, inv_hx);
    }
    if (grid_.dim() == 2) {
        const double inv_hy = 1.0 / grid_.h(1);
        for (int j = 1; j < ny; ++j) {
            const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
            for (int i = 0; i < nx; ++i) face(row - nx + i, row + i, inv_hy);
        }
    }
}

void RhsKernel::evaluate(std::span<const double> u, std::span<const double> v, std::span<double> du,
                         std::span<double> dv) {
    transport(u, v, du, dv);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double uv = u[k] * v[k];
        du[k] += uv;
        dv[k] -= uv;
    }
}

double RhsKernel::stability_dt(std::span<const double> u, std::span<const double> v, double safety) {
    fill_coefficients(u, v);
    double max_diff = 0.0;
    double max_taxis = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        max_diff = std::max(max_diff, diff_coef_[k]);
        max_taxis = std::max(max_taxis, taxis_coef_[k]);
    }
    double max_grad_v = 0.0;
    const int nx = grid_.n(0);
    const int ny = grid_.n(1);
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
        for (int i = 1; i < nx; ++i) max_grad_v = std::max(max_grad_v, std::abs(v[row + i] - v[row + i - 1]));
    }
    max_grad_v /= grid_.h(0);
    if (grid_.dim() == 2) {
        double gy = 0.0;
        for (std::size_t k = static_cast<std::size_t>(nx); k < u.size(); ++k) gy = std::max(gy, std::abs(v[k] - v[k - nx]));
        max_grad_v = std::max(max_grad_v, gy / grid_.h(1));
    }
    const double d_max = std::max({1.0, max_diff, max_taxis * max_grad_v});
    const double h = grid_.min_spacing();
    return safety * h * h / (2.0 * grid_.dim() * d_max);
}

Rates rhs(const State& state, const ModelParams& params) {
    const Grid& g = state.u.grid();
    RhsKernel kernel(g, params);
    ScalarField du(g, 0.0);
    ScalarField dv(g, 0.0);
    kernel.evaluate(state.u.values(), state.v.values(), du.values(), dv.values());
    return Rates{std::move(du), std::move(dv)};
}

double stability_dt(const State& state, const ModelParams& params, double safety) {
    RhsKernel kernel(state.u.grid(), params);
    return kernel.stability_dt(state.u.values(), state.v.values(), safety);
}

}  // namespace ndtaxis
