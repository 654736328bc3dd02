#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ndtaxis/errors.hpp"
#include "ndtaxis/model.hpp"

namespace ndtaxis {

enum class Scheme { explicit_euler, semi_implicit_v };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StepControl {
    double safety = 0.4;
    double dt_min = 1e-14;
    int max_halvings = 40;
    Scheme scheme = Scheme::explicit_euler;
    /// Upper cap on every step; infinity leaves the stability bound in charge.
    double dt_max = std::numeric_limits<double>::infinity();

    void validate() const;
};

/// Raised when positivity cannot be restored by halving. Carries the state
/// the failed step started from.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, State state, double last_dt)
        : Error(what), state_(std::move(state)), last_dt_(last_dt) {}
    const State& state() const { return state_; }
    double last_dt() const { return last_dt_; }

private:
    State state_;
    double last_dt_;
};

/// Adds source terms evaluated at time t into (fu, fv). Used by manufactured
/// solutions; the plain model has none.
using Forcing = std::function<void(double t, std::span<double> fu, std::span<double> fv)>;
using Observer = std::function<void(const State&)>;

class Stepper {
public:
    Stepper(const Grid& grid, const ModelParams& params, const StepControl& ctrl, Forcing forcing = {});

    /// One accepted step of size <= min(stability dt, dt_max, dt_cap), in place.
    /// Returns true when the accepted step used the full dt_cap.
    bool advance(State& state, double dt_cap = std::numeric_limits<double>::infinity());

    /// Steps until state.t == t_end exactly, calling `observer` after each step.
    State run_until(State state, double t_end, const Observer& observer = {});

    int last_halvings() const { return last_halvings_; }
    double last_dt() const { return last_dt_; }
    long long steps_taken() const { return steps_taken_; }

private:
    bool try_explicit(const State& state, double dt);
    bool try_semi_implicit(const State& state, double dt);
    void apply_laplacian(std::span<const double> x, std::span<double> y) const;
    void add_forcing(double t, double dt);

    Grid grid_;
    ModelParams params_;
    StepControl ctrl_;
    Forcing forcing_;
    RhsKernel kernel_;
    std::vector<double> du_, dv_, u_next_, v_next_, fu_, fv_, diag_;
    double uv_integral_ = 0.0;
    int last_halvings_ = 0;
    double last_dt_ = 0.0;
    long long steps_taken_ = 0;
};

State step(const State& state, const ModelParams& params, const StepControl& ctrl);

State run_until(State state, double t_end, const ModelParams& params, const StepControl& ctrl,
                const Observer& observer = {});

}  // namespace ndtaxis
