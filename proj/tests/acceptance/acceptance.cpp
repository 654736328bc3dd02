// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ndtaxis/diagnostics.hpp"
#include "ndtaxis/experiments.hpp"
#include "ndtaxis/inequality_lab.hpp"
#include "ndtaxis/presets.hpp"

using namespace ndtaxis;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// criterion 1-4
constexpr double kConservationRel = 1e-10;
constexpr double kMonotoneStep = 1e-12;
constexpr double kBudgetSlack = 1e-10;
constexpr double kLowerBoundSlack = 1e-6;
constexpr double kRunBudget1 = 60.0;
// criterion 5
constexpr double kPlateauSlack = 1e-2;
constexpr double kEpsilonSpread = 10.0;
constexpr double kBudget5 = 600.0;
// criterion 6
constexpr double kLateGrowth = 0.05;
constexpr double kRunBudget6 = 300.0;
// criterion 8
constexpr double kResidual = 1e-10;
constexpr double kSpatialLo = 1.8, kSpatialHi = 2.2;
constexpr double kTemporalLo = 0.8, kTemporalHi = 1.2;
// criterion 9
constexpr double kQuadrature = 1e-3;
// criterion 10
constexpr double kGridAgreement = 0.2;

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

fs::path out_root() {
    const fs::path p = fs::temp_directory_path() / "ndtaxis_acceptance";
    return p;
}

RunConfig colony_config(int dim, double l, double T) {
    RunConfig c;
    c.domain = dim == 1 ? Domain::line(8.0) : Domain::rectangle(8.0, 8.0);
    c.cells = dim == 1 ? std::array<int, 2>{256, 1} : std::array<int, 2>{64, 64};
    c.model.l = l;
    c.model.epsilon = 0.01;
    c.T = T;
    c.init.name = "gaussian_colony";
    c.init.params = {{"amplitude", 1.0}, {"width", 0.5}, {"background", 0.1}, {"v_level", 4.0}};
    c.interval = T / 200.0;
    c.seed = 7;
    validate(c);
    return c;
}

struct StepAudit {
    double total0 = 0.0, mass_u_prev = 0.0, sup_v_prev = 0.0;
    double worst_total = 0.0;  // relative drift of int(u + v)
    double worst_mass_drop = 0.0;
    double worst_sup_v_rise = 0.0;
    bool positive = true;
    double max_sup_u = 0.0;
    long long steps = 0;
};

// Criteria 1-4 on one run.
struct BasicRun {
    std::string label;
    StepAudit audit;
    SimulationResult result;
    double mass_v0 = 0.0;
    double min_v0 = 0.0;
};

BasicRun basic_run(int dim, double l) {
    BasicRun run;
    run.label = std::to_string(dim) + "D l=" + fmt("%g", l);
    const RunConfig c = colony_config(dim, l, 5.0);
    const auto [u0, v0] = make_initial(c.init, c.grid(), c.seed);
    const State s0 = regularize_initial(u0, v0, c.model);
    StepAudit& a = run.audit;
    a.total0 = integrate(s0.u) + integrate(s0.v);
    a.mass_u_prev = integrate(s0.u);
    a.sup_v_prev = s0.v.max();
    a.max_sup_u = s0.u.max();
    run.mass_v0 = integrate(s0.v);
    run.min_v0 = s0.v.min();

    SimulationOptions opts;
    opts.on_step = [&a](const State& s, const Stepper&) {
        const double mu = integrate(s.u);
        const double total = mu + integrate(s.v);
        a.worst_total = std::max(a.worst_total, std::abs(total - a.total0) / a.total0);
        a.worst_mass_drop = std::max(a.worst_mass_drop, (a.mass_u_prev - mu) / std::max(1.0, a.mass_u_prev));
        a.mass_u_prev = mu;
        const double sv = s.v.max();
        a.worst_sup_v_rise = std::max(a.worst_sup_v_rise, sv - a.sup_v_prev);
        a.sup_v_prev = sv;
        if (!(s.u.min() > 0.0 && s.v.min() > 0.0)) a.positive = false;
        a.max_sup_u = std::max(a.max_sup_u, s.u.max());
        ++a.steps;
    };
    run.result = simulate(c, opts);
    return run;
}

bool plateau(const std::vector<FunctionalRecord>& series, double T,
             const std::function<double(const FunctionalRecord&)>& get, double* early_out, double* all_out) {
    double early = 0.0, all = 0.0;
    for (const auto& r : series) {
        const double x = get(r);
        all = std::max(all, x);
        if (r.t <= 0.5 * T) early = std::max(early, x);
    }
    if (early_out) *early_out = early;
    if (all_out) *all_out = all;
    return all <= (1.0 + kPlateauSlack) * early;
}

void criteria_1_to_4() {
    std::vector<BasicRun> runs;
    for (int dim : {1, 2}) {
        for (double l : {1.0, 2.0, 3.0}) runs.push_back(basic_run(dim, l));
    }

    bool ok1 = true, ok2 = true, ok3 = true, ok4 = true;
    std::string d1, d2, d3, d4;
    for (const auto& r : runs) {
        const auto& a = r.audit;
        const bool pass1 = r.result.ok && a.worst_total <= kConservationRel && a.worst_mass_drop <= kMonotoneStep &&
                           r.result.wall_seconds < kRunBudget1;
        ok1 = ok1 && pass1;
        d1 += " [" + r.label + fmt(" drift=%.1e", a.worst_total) + fmt(" drop=%.1e", a.worst_mass_drop) +
              fmt(" %.1fs]", r.result.wall_seconds);

        const bool pass2 = r.result.ok && a.worst_sup_v_rise <= kMonotoneStep && a.positive;
        ok2 = ok2 && pass2;
        d2 += " [" + r.label + fmt(" rise=%.1e", a.worst_sup_v_rise) + (a.positive ? " pos]" : " NONPOS]");

        const double budget = r.result.final_state.cumulative_uv;
        const bool pass3 = budget <= r.mass_v0 + kBudgetSlack;
        ok3 = ok3 && pass3;
        d3 += " [" + r.label + fmt(" %.6g", budget) + fmt(" <= %.6g]", r.mass_v0);

        const double T = r.result.final_state.t;
        const double bound = r.min_v0 * std::exp(-a.max_sup_u * T) - kLowerBoundSlack;
        const double min_v = r.result.final_state.v.min();
        const bool pass4 = min_v >= bound;
        ok4 = ok4 && pass4;
        d4 += " [" + r.label + fmt(" min v=%.3e", min_v) + fmt(" bound=%.3e]", bound);
    }
    verdict(1, ok1, "conservation, monotone mass:" + d1);
    verdict(2, ok2, "max principle, positivity:" + d2);
    verdict(3, ok3, "consumption budget:" + d3);
    verdict(4, ok4, "comparison lower bound:" + d4);
}

void criterion_5() {
    const auto start = std::chrono::steady_clock::now();
    const double T = 10.0;
    bool ok = true;
    std::string detail;
    auto f4 = [](const FunctionalRecord& r) { return weighted_of(r, 4.0, 3.0); };
    auto l2 = [](const FunctionalRecord& r) { return lp_of(r, 2.0); };
    auto l4 = [](const FunctionalRecord& r) { return lp_of(r, 4.0); };

    std::vector<std::array<double, 3>> eps_maxima;
    auto run_one = [&](double l, double eps, bool record) {
        RunConfig c = colony_config(2, l, T);
        c.model.epsilon = eps;
        c.interval = 0.02;
        validate(c);
        const SimulationResult r = simulate(c);
        if (!r.ok) {
            ok = false;
            detail += " [l=" + fmt("%g", l) + fmt(" eps=%g failed]", eps);
            return;
        }
        std::array<double, 3> maxima{};
        bool p = true;
        int k = 0;
        for (const auto& get : {std::function<double(const FunctionalRecord&)>(f4), std::function<double(const FunctionalRecord&)>(l2),
                                std::function<double(const FunctionalRecord&)>(l4)}) {
            double early, all;
            p = plateau(r.series, T, get, &early, &all) && p;
            maxima[static_cast<std::size_t>(k++)] = all;
        }
        ok = ok && p;
        detail += " [l=" + fmt("%g", l) + fmt(" eps=%g", eps) + fmt(" F4max=%.3g", maxima[0]) +
                  fmt(" L2max=%.4g", maxima[1]) + fmt(" L4max=%.4g", maxima[2]) + (p ? " plateau]" : " NO PLATEAU]");
        if (record) eps_maxima.push_back(maxima);
    };
    for (double l : {1.5, 2.0, 2.5, 3.0}) run_one(l, 0.01, l == 2.0);
    for (double eps : {0.1, 0.001}) run_one(2.0, eps, true);

    if (eps_maxima.size() == 3) {
        for (std::size_t q = 0; q < 3; ++q) {
            double lo = kInf, hi = 0.0;
            for (const auto& m : eps_maxima) {
                lo = std::min(lo, m[q]);
                hi = std::max(hi, m[q]);
            }
            const double spread = hi / lo;
            detail += std::string(q == 0 ? " spread F4" : q == 1 ? " L2" : " L4") + fmt("=%.3g", spread);
            ok = ok && spread < kEpsilonSpread;
        }
    } else {
        ok = false;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && wall < kBudget5;
    verdict(5, ok, "uniform functional bounds:" + detail + fmt(" total %.1fs", wall));
}

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (double l : {1.0, 2.0, 4.0}) {
        RunConfig c;
        c.domain = Domain::line(16.0);
        c.cells = {256, 1};
        c.model.l = l;
        c.model.epsilon = 0.01;
        c.T = 100.0;
        c.interval = 0.5;
        c.seed = 11;
        c.init.name = "perturbed_front";
        c.init.params = {{"base", 1.0}, {"noise_amp", 0.2}, {"front", 0.25}, {"front_width", 0.02}, {"v_level", 2.0}};
        validate(c);
        double mid = 0.0, late = 0.0;
        SimulationOptions opts;
        opts.on_step = [&](const State& s, const Stepper&) {
            if (s.t >= 25.0 && s.t <= 50.0) mid = std::max(mid, s.u.max());
            if (s.t >= 50.0) late = std::max(late, s.u.max());
        };
        const SimulationResult r = simulate(c, opts);
        const double growth = late / mid - 1.0;
        const bool pass = r.ok && growth < kLateGrowth && r.wall_seconds < kRunBudget6;
        ok = ok && pass;
        detail += " [l=" + fmt("%g", l) + fmt(" sup[25,50]=%.5g", mid) + fmt(" sup[50,100]=%.5g", late) +
                  fmt(" growth=%.2e", growth) + fmt(" %.1fs]", r.wall_seconds);
    }
    verdict(6, ok, "1D uniform-in-time bound:" + detail);
}

void criterion_7() {
    RunConfig c = colony_config(1, 2.0, 1.0);
    c.out_dir = out_root() / "continuation";
    fs::remove_all(c.out_dir);
    std::vector<ContinuationRow> rows;
    const RunManifest m = epsilon_continuation(c, {0.1, 0.05, 0.025, 0.0125}, 1, &rows);
    bool ok = m.ok() && rows.size() == 3;
    std::string detail;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        detail += fmt(" %.6g", rows[k].l1_u);
        if (k > 0) ok = ok && rows[k].l1_u < rows[k - 1].l1_u;
    }
    verdict(7, ok, "epsilon continuation L1(u) differences:" + detail);
}

void criterion_8() {
    RunConfig c;
    c.domain = Domain::line(1.0);
    c.cells = {32, 1};
    c.T = 0.1;
    c.interval = 0.1;
    validate(c);
    c.out_dir = out_root() / "refinement";
    fs::remove_all(c.out_dir);
    RefinementResult res;
    std::string detail;
    bool ok = false;
    try {
        const RunManifest m = refinement_study(c, {32, 64, 128, 256}, true, 1, &res);
        ok = m.ok() && res.residual <= kResidual && res.spatial.size() == 4 && res.temporal.size() >= 3;
        detail += fmt(" residual=%.1e", res.residual) + " spatial";
        for (std::size_t k = 1; k < res.spatial.size(); ++k) {
            const auto& r = res.spatial[k];
            detail += fmt(" %.4f", r.order_u) + fmt("/%.4f", r.order_v);
            ok = ok && r.order_u >= kSpatialLo && r.order_u <= kSpatialHi && r.order_v >= kSpatialLo &&
                 r.order_v <= kSpatialHi;
        }
        detail += " temporal";
        for (std::size_t k = 1; k < res.temporal.size(); ++k) {
            const auto& r = res.temporal[k];
            detail += fmt(" %.4f", r.order_u) + fmt("/%.4f", r.order_v);
            ok = ok && r.order_u >= kTemporalLo && r.order_u <= kTemporalHi && r.order_v >= kTemporalLo &&
                 r.order_v <= kTemporalHi;
        }
    } catch (const std::exception& e) {
        detail = e.what();
    }
    verdict(8, ok, "manufactured solution orders (u/v):" + detail);
}

void criterion_9() {
    const Grid g = Grid::line(1.0, 256);
    const ScalarField ramp = ScalarField::sample(g, [](double x, double) { return 1.0 + x; });
    const State s{ramp, ScalarField(g, 1.0), 0.0, 0.0};
    const double du = dissipations(s).diss_u;
    const double f4 = weighted_gradient(ramp, 4.0, 3.0);
    const double f6 = weighted_gradient(ramp, 6.0, 5.0);
    const double e1 = std::abs(du - std::log(2.0));
    const double e2 = std::abs(f4 - 0.375);
    const double e3 = std::abs(f6 - 0.234375);
    verdict(9, e1 < kQuadrature && e2 < kQuadrature && e3 < kQuadrature,
            "quadrature oracles: diss_u err" + fmt(" %.2e", e1) + fmt(", F4 err %.2e", e2) + fmt(", F6 err %.2e", e3));
}

void criterion_10() {
    bool finite = true;
    bool exact = true;
    bool agree = true;
    std::string detail;

    const Grid unit = Grid::line(1.0, 16);
    const IneqReport a = check_ineq_61(ScalarField(unit, 1.0), ScalarField(unit, 1.0), 1.0);
    const IneqReport b = check_ineq_61(ScalarField(unit, 2.0), ScalarField(unit, 1.0), 1.0);
    const double fit = fit_constant([&](int) { return std::pair{ScalarField(unit, 1.0), ScalarField(unit, 1.0)}; }, 1,
                                    Inequality::sobolev_product, FitParams{1.0, 1.0});
    exact = a.ratio == 1.0 && b.ratio == 1.0 && fit == 1.0;

    const BandLimitedFamily family(2024, 100);
    const std::vector<std::pair<Grid, Grid>> grids = {{Grid::line(1.0, 128), Grid::line(1.0, 256)},
                                                      {Grid::rectangle(1.0, 1.0, 32, 32), Grid::rectangle(1.0, 1.0, 64, 64)}};
    double worst = 0.0;
    for (const auto& [coarse, fine] : grids) {
        for (double p : {1.0, 2.0}) {
            std::vector<std::pair<Inequality, double>> cases{{Inequality::sobolev_product, 1.0}};
            for (double eta : {0.1, 1.0, 10.0}) cases.push_back({Inequality::gradient_coupling, eta});
            for (const auto& [which, eta] : cases) {
                std::vector<IneqReport> reports;
                const double c1 = fit_constant(family, coarse, which, FitParams{p, eta}, &reports);
                const double c2 = fit_constant(family, fine, which, FitParams{p, eta}, &reports);
                for (const auto& r : reports) finite = finite && std::isfinite(r.ratio);
                const double rel = std::abs(c1 - c2) / std::max(c1, c2);
                worst = std::max(worst, rel);
                agree = agree && std::isfinite(c1) && std::isfinite(c2) && rel <= kGridAgreement;
            }
        }
    }
    detail = std::string(" finite=") + (finite ? "yes" : "no") + " constant-pair ratio exact=" + (exact ? "yes" : "no") +
             fmt(" worst n/2n relative difference=%.2e", worst);
    verdict(10, finite && exact && agree, "inequality lab:" + detail);
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criteria_1_to_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("acceptance: %d failed, %.1fs\n", failures, wall);
    return failures == 0 ? 0 : 1;
}
