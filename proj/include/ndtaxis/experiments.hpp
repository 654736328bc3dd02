#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ndtaxis/config.hpp"
#include "ndtaxis/diagnostics.hpp"
#include "ndtaxis/stepper.hpp"

namespace ndtaxis {

std::string version_string();

struct RasterScale {
    std::string file;
    double min = 0.0;
    double max = 0.0;
};

struct RunManifest {
    std::string config_text;  // canonical echo of the validated config
    std::string version;
    std::string start_time;   // UTC, ISO 8601
    std::string end_time;
    double wall_seconds = 0.0;
    std::vector<std::string> files;  // relative to the output directory
    std::vector<RasterScale> rasters;
    std::string status = "success";  // or "step_failure", "error"
    std::string message;
    std::vector<std::string> children;  // child run identifiers (studies)
    long long steps = 0;

    bool ok() const { return status == "success"; }
};

/// Per-step hook; receives the state after every accepted step.
using StepHook = std::function<void(const State&, const Stepper&)>;
/// Called at sample and snapshot times; `record` is null at snapshot-only times.
using EventHook = std::function<void(const State&, const FunctionalRecord* record, bool snapshot)>;

struct SimulationResult {
    State final_state;
    std::vector<FunctionalRecord> series;
    long long steps = 0;
    double wall_seconds = 0.0;
    bool ok = true;
    std::string message;
};

struct SimulationOptions {
    StepHook on_step;
    EventHook on_event;
    Forcing forcing;
    std::optional<State> initial;  // replaces the preset and regularization when set
};

/// regularize_initial -> run_until(T) with records at k * interval,
/// k = 0..floor(T / interval). A StepFailure ends the run early with ok = false
/// and final_state set to the last accepted state.
SimulationResult simulate(const RunConfig& config, const SimulationOptions& options = {});

/// Runs the scenario and writes series.csv, u_<t>.field / v_<t>.field at the
/// snapshot times, optional u_<t>.pgm / v_<t>.pgm, and manifest.json into
/// config.out_dir.
RunManifest run_scenario(const RunConfig& config);
RunManifest run_scenario(const RunConfig& config, const SimulationOptions& options, SimulationResult* result);

struct ContinuationRow {
    double eps_a, eps_b;
    double l1_u, l1_v;
    double sup_f4_a, sup_f4_b;
};

/// One child run per epsilon (strictly decreasing, in (0, 1)); writes continuation.csv.
RunManifest epsilon_continuation(const RunConfig& config, const std::vector<double>& eps_list, int jobs = 1,
                                 std::vector<ContinuationRow>* rows = nullptr);

struct RefinementRow {
    int n;
    double h;
    double err_u, err_v;      // discrete L2 errors at T
    double order_u, order_v;  // against the previous row; NaN on the first
};

struct TemporalRow {
    double dt;
    double diff_u, diff_v;    // discrete L2 difference to the run with dt / 2
    double order_u, order_v;  // NaN on the first
};

struct RefinementResult {
    double residual = 0.0;  // manufactured residual check (mms only)
    std::vector<RefinementRow> spatial;
    std::vector<TemporalRow> temporal;
};

/// Doubling n_list. With mms the forced system is run against the exact pair
/// at dt = kappa h^2 and a temporal self-convergence study runs at the
/// coarsest n; without mms errors are measured against the finest grid.
/// Writes refinement.csv (and temporal.csv with mms).
RunManifest refinement_study(const RunConfig& config, const std::vector<int>& n_list, bool mms = true, int jobs = 1,
                             RefinementResult* result = nullptr);

struct SweepRow {
    double l;
    double sup_lp2, sup_lpinf, sup_f4, final_mass_u;
    bool positive = true;  // min u, min v > 0 after every accepted step
    bool ok = true;
};

/// One child run per l; writes sweep_summary.csv.
RunManifest l_sweep(const RunConfig& config, const std::vector<double>& l_list, int jobs = 1,
                    std::vector<SweepRow>* rows = nullptr);

struct IneqSummaryRow {
    std::string inequality;
    int n;
    double p, eta;  // eta = 0 for the Sobolev-product inequality
    double fitted_c;
    double max_ratio;
    bool all_finite;
};

/// Fits both inequalities over the seeded band-limited family on every grid of
/// ineq.n_list (default n and 2n); writes ineq_report.csv and ineq_summary.json.
RunManifest inequality_study(const RunConfig& config, int jobs = 1, std::vector<IneqSummaryRow>* rows = nullptr);

/// Runs fn(0..count-1) on up to `jobs` threads; rethrows the first exception.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

/// 8-bit binary PGM with linear min-max scaling; returns the scale used.
RasterScale write_pgm(const std::filesystem::path& path, const ScalarField& f);

}  // namespace ndtaxis
