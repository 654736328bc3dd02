#include "ndtaxis/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "ndtaxis/cg.hpp"
#include "ndtaxis/format.hpp"

namespace ndtaxis {

namespace {
constexpr double kLinearTolerance = 1e-10;

bool all_positive(std::span<const double> x) {
    for (double value : x) {
        if (!(value > 0.0) || !std::isfinite(value)) return false;
    }
    return true;
}
}  // namespace

std::string to_string(Scheme s) { return s == Scheme::explicit_euler ? "explicit" : "semi_implicit_v"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "explicit") return Scheme::explicit_euler;
    if (s == "semi_implicit_v") return Scheme::semi_implicit_v;
    throw InvalidArgument("scheme must be 'explicit' or 'semi_implicit_v', got '" + s + "'");
}

void StepControl::validate() const {
    if (!(safety > 0.0 && safety <= 1.0)) throw InvalidArgument("time.safety must lie in (0, 1], got " + format_number(safety));
    if (!(dt_min > 0.0)) throw InvalidArgument("time.dt_min must be > 0");
    if (max_halvings < 0) throw InvalidArgument("time.max_halvings must be >= 0");
    if (!(dt_max > 0.0)) throw InvalidArgument("time.dt_max must be > 0");
}

Stepper::Stepper(const Grid& grid, const ModelParams& params, const StepControl& ctrl, Forcing forcing)
    : grid_(grid),
      params_(params),
      ctrl_(ctrl),
      forcing_(std::move(forcing)),
      kernel_(grid, params),
      du_(grid.size()),
      dv_(grid.size()),
      u_next_(grid.size()),
      v_next_(grid.size()) {
    params_.validate();
    ctrl_.validate();
    if (forcing_) {
        fu_.resize(grid.size());
        fv_.resize(grid.size());
    }
}

void Stepper::add_forcing(double t, double dt) {
    if (!forcing_) return;
    std::fill(fu_.begin(), fu_.end(), 0.0);
    std::fill(fv_.begin(), fv_.end(), 0.0);
    forcing_(t, fu_, fv_);
    for (std::size_t k = 0; k < u_next_.size(); ++k) {
        u_next_[k] += dt * fu_[k];
        v_next_[k] += dt * fv_[k];
    }
}

bool Stepper::try_explicit(const State& state, double dt) {
    const auto u = state.u.values();
    const auto v = state.v.values();
    kernel_.evaluate(u, v, du_, dv_);
    double uv = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        u_next_[k] = u[k] + dt * du_[k];
        v_next_[k] = v[k] + dt * dv_[k];
        uv += u[k] * v[k];
    }
    add_forcing(state.t, dt);
    uv_integral_ = uv * grid_.cell_volume();
    return all_positive(u_next_) && all_positive(v_next_);
}

void Stepper::apply_laplacian(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    const int nx = grid_.n(0);
    const int ny = grid_.n(1);
    const double cx = 1.0 / (grid_.h(0) * grid_.h(0));
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx);
        for (int i = 1; i < nx; ++i) {
            const double f = (x[row + i] - x[row + i - 1]) * cx;
            y[row + i - 1] += f;
            y[row + i] -= f;
        }
    }
    if (grid_.dim() == 2) {
        const double cy = 1.0 / (grid_.h(1) * grid_.h(1));
        for (std::size_t k = static_cast<std::size_t>(nx); k < x.size(); ++k) {
            const double f = (x[k] - x[k - nx]) * cy;
            y[k - nx] += f;
            y[k] -= f;
        }
    }
}

bool Stepper::try_semi_implicit(const State& state, double dt) {
    const auto u = state.u.values();
    const auto v = state.v.values();
    kernel_.transport(u, v, du_, dv_);

    // (I - dt lap + dt diag(u)) v' = v
    const std::size_t n = u.size();
    if (diag_.size() != n) diag_.resize(n);
    const int nx = grid_.n(0);
    const int ny = grid_.n(1);
    const double cx = 1.0 / (grid_.h(0) * grid_.h(0));
    const double cy = grid_.dim() == 2 ? 1.0 / (grid_.h(1) * grid_.h(1)) : 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int nbx = (i > 0) + (i < nx - 1);
            const int nby = grid_.dim() == 2 ? (j > 0) + (j < ny - 1) : 0;
            const std::size_t k = grid_.index(i, j);
            diag_[k] = 1.0 + dt * (nbx * cx + nby * cy + u[k]);
        }
    }
    std::vector<double> lap(n);
    const LinearOperator op = [&](std::span<const double> x, std::span<double> y) {
        apply_laplacian(x, lap);
        for (std::size_t k = 0; k < n; ++k) y[k] = x[k] - dt * lap[k] + dt * u[k] * x[k];
    };
    std::copy(v.begin(), v.end(), v_next_.begin());
    std::vector<double> rhs_v(v.begin(), v.end());
    if (forcing_) {
        std::fill(fu_.begin(), fu_.end(), 0.0);
        std::fill(fv_.begin(), fv_.end(), 0.0);
        forcing_(state.t, fu_, fv_);
        for (std::size_t k = 0; k < n; ++k) rhs_v[k] += dt * fv_[k];
    }
    const CgResult cg = conjugate_gradient(op, diag_, rhs_v, v_next_, kLinearTolerance, 20 * static_cast<int>(n) + 100);
    if (!cg.converged) return false;

    double uv = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double reaction = u[k] * v_next_[k];
        u_next_[k] = u[k] + dt * (du_[k] + reaction);
        if (forcing_) u_next_[k] += dt * fu_[k];
        uv += reaction;
    }
    uv_integral_ = uv * grid_.cell_volume();
    return all_positive(u_next_) && all_positive(v_next_);
}

bool Stepper::advance(State& state, double dt_cap) {
    double dt = kernel_.stability_dt(state.u.values(), state.v.values(), ctrl_.safety);
    dt = std::min(dt, ctrl_.dt_max);
    bool lands_on_cap = false;
    if (dt >= dt_cap) {
        dt = dt_cap;
        lands_on_cap = true;
    }
    last_halvings_ = 0;
    for (;;) {
        const bool ok = ctrl_.scheme == Scheme::explicit_euler ? try_explicit(state, dt) : try_semi_implicit(state, dt);
        if (ok) break;
        if (last_halvings_ >= ctrl_.max_halvings) {
            throw StepFailure("step failed: positivity not restored after " + std::to_string(last_halvings_) +
                                  " halvings at t = " + format_number(state.t),
                              state, dt);
        }
        dt *= 0.5;
        lands_on_cap = false;
        ++last_halvings_;
        if (dt < ctrl_.dt_min) {
            throw StepFailure("step failed: dt = " + format_number(dt) + " fell below dt_min at t = " +
                                  format_number(state.t),
                              state, dt);
        }
    }
    std::copy(u_next_.begin(), u_next_.end(), state.u.values().begin());
    std::copy(v_next_.begin(), v_next_.end(), state.v.values().begin());
    state.cumulative_uv += dt * uv_integral_;
    state.t += dt;
    last_dt_ = dt;
    ++steps_taken_;
    return lands_on_cap;
}

State Stepper::run_until(State state, double t_end, const Observer& observer) {
    if (t_end < state.t) {
        throw InvalidArgument("run_until: target time " + format_number(t_end) + " precedes state time " +
                              format_number(state.t));
    }
    while (state.t < t_end) {
        const double remaining = t_end - state.t;
        if (advance(state, remaining) || state.t > t_end) state.t = t_end;
        if (observer) observer(state);
    }
    return state;
}

State step(const State& state, const ModelParams& params, const StepControl& ctrl) {
    Stepper stepper(state.u.grid(), params, ctrl);
    State next = state;
    stepper.advance(next);
    return next;
}

State run_until(State state, double t_end, const ModelParams& params, const StepControl& ctrl,
                const Observer& observer) {
    Stepper stepper(state.u.grid(), params, ctrl);
    return stepper.run_until(std::move(state), t_end, observer);
}

}  // namespace ndtaxis
