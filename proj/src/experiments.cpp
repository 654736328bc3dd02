#include "ndtaxis/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ndtaxis/field_io.hpp"
#include "ndtaxis/format.hpp"
#include "ndtaxis/inequality_lab.hpp"
#include "ndtaxis/manufactured.hpp"
#include "ndtaxis/presets.hpp"

#ifndef NDTAXIS_VERSION
#define NDTAXIS_VERSION "unknown"
#endif

namespace ndtaxis {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream o;
    o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return o.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

json config_json(const std::string& text) {
    json out = json::object();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return out;
}

void write_manifest(const fs::path& dir, const RunManifest& m, const json& extra = json::object()) {
    json j;
    j["config"] = config_json(m.config_text);
    j["version"] = m.version;
    j["start_time"] = m.start_time;
    j["end_time"] = m.end_time;
    j["wall_seconds"] = m.wall_seconds;
    j["status"] = m.status;
    j["message"] = m.message;
    j["steps"] = m.steps;
    j["files"] = m.files;
    json rasters = json::array();
    for (const auto& r : m.rasters) rasters.push_back({{"file", r.file}, {"min", r.min}, {"max", r.max}});
    j["rasters"] = rasters;
    j["children"] = m.children;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    std::ofstream out(dir / "manifest.json");
    out << j.dump(2) << "\n";
}

std::string csv_number(double x) { return format_number(x); }

double l2_difference(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s * a.grid().cell_volume());
}

double l1_difference(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s * a.grid().cell_volume();
}

/// Average of fine cells over each coarse cell (fine resolution a multiple of coarse).
ScalarField restrict_to(const ScalarField& fine, const Grid& coarse) {
    const Grid& g = fine.grid();
    const int rx = g.n(0) / coarse.n(0);
    const int ry = g.n(1) / coarse.n(1);
    ScalarField out(coarse, 0.0);
    for (int j = 0; j < g.n(1); ++j) {
        for (int i = 0; i < g.n(0); ++i) out[coarse.index(i / rx, j / ry)] += fine.at(i, j);
    }
    const double w = 1.0 / (rx * ry);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= w;
    return out;
}

double order_between(double coarse_err, double fine_err, double ratio = 2.0) {
    if (!(coarse_err > 0.0 && fine_err > 0.0)) return kNaN;
    return std::log(coarse_err / fine_err) / std::log(ratio);
}

struct Event {
    double t;
    bool sample;
    bool snapshot;
};

std::vector<Event> event_times(const RunConfig& c) {
    std::vector<Event> events;
    const auto count = static_cast<long long>(std::floor(c.T / c.interval * (1.0 + 1e-12)));
    for (long long k = 0; k <= count; ++k) events.push_back({std::min(c.T, k * c.interval), true, false});
    const double tol = 1e-12 * c.T;
    for (double s : c.snapshots) {
        auto it = std::find_if(events.begin(), events.end(), [&](const Event& e) { return std::abs(e.t - s) <= tol; });
        if (it != events.end()) {
            it->snapshot = true;
        } else {
            events.push_back({s, false, true});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return events;
}

std::string child_id(const std::string& prefix, double value) { return prefix + "_" + format_number(value); }

RunManifest study_manifest(const RunConfig& config) {
    RunManifest m;
    m.config_text = to_text(config);
    m.version = version_string();
    m.start_time = utc_now();
    return m;
}

void finish_study(RunManifest& m, const RunConfig& config, std::chrono::steady_clock::time_point start,
                  const json& extra = json::object()) {
    m.end_time = utc_now();
    m.wall_seconds = seconds_since(start);
    write_manifest(config.out_dir, m, extra);
}

}  // namespace

std::string version_string() { return std::string("ndtaxis ") + NDTAXIS_VERSION; }

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    const int workers = std::max(1, std::min(jobs, count));
    if (workers == 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first) first = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

RasterScale write_pgm(const fs::path& path, const ScalarField& f) {
    const Grid& g = f.grid();
    RasterScale scale{path.filename().string(), f.min(), f.max()};
    const double span = scale.max - scale.min;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "P5\n" << g.n(0) << " " << g.n(1) << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(g.n(0)));
    for (int j = g.n(1) - 1; j >= 0; --j) {
        for (int i = 0; i < g.n(0); ++i) {
            const double s = span > 0.0 ? (f.at(i, j) - scale.min) / span : 0.0;
            row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(std::clamp(s, 0.0, 1.0) * 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    return scale;
}

SimulationResult simulate(const RunConfig& config, const SimulationOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Grid grid = config.grid();
    SimulationResult result;
    State state;
    if (options.initial) {
        state = *options.initial;
    } else {
        const auto [u0, v0] = make_initial(config.init, grid, config.seed);
        state = regularize_initial(u0, v0, config.model);
    }
    Stepper stepper(grid, config.model, config.step, options.forcing);
    Observer observer;
    if (options.on_step) observer = [&](const State& s) { options.on_step(s, stepper); };

    const DiagnosticsSpec& spec = config.diagnostics;
    try {
        for (const Event& e : event_times(config)) {
            if (e.t > state.t) state = stepper.run_until(std::move(state), e.t, observer);
            if (e.sample) result.series.push_back(full_record(state, config.model, spec));
            if (options.on_event) options.on_event(state, e.sample ? &result.series.back() : nullptr, e.snapshot);
        }
    } catch (const StepFailure& f) {
        result.ok = false;
        result.message = f.what();
        state = f.state();
    }
    result.final_state = std::move(state);
    result.steps = stepper.steps_taken();
    result.wall_seconds = seconds_since(start);
    return result;
}

RunManifest run_scenario(const RunConfig& config) { return run_scenario(config, {}, nullptr); }

RunManifest run_scenario(const RunConfig& config, const SimulationOptions& options, SimulationResult* result_out) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest m;
    m.config_text = to_text(config);
    m.version = version_string();
    m.start_time = utc_now();

    const fs::path dir = config.out_dir;
    fs::create_directories(dir);
    std::ofstream series(dir / "series.csv");
    if (!series) throw Error("cannot write " + (dir / "series.csv").string());
    series << csv_header(config.diagnostics) << "\n";
    m.files.push_back("series.csv");

    SimulationOptions opts = options;
    opts.on_event = [&](const State& s, const FunctionalRecord* record, bool snapshot) {
        if (options.on_event) options.on_event(s, record, snapshot);
        // rows are written as they are produced so a failed run keeps its partial series
        if (record) series << csv_row(*record) << "\n";
        if (!snapshot) return;
        const std::string t = format_number(s.t);
        for (const auto& [name, field] : {std::pair{"u", &s.u}, std::pair{"v", &s.v}}) {
            const std::string stem = std::string(name) + "_" + t;
            write_field(dir / (stem + ".field"), *field);
            m.files.push_back(stem + ".field");
            if (config.images) {
                m.rasters.push_back(write_pgm(dir / (stem + ".pgm"), *field));
                m.files.push_back(stem + ".pgm");
            }
        }
    };
    SimulationResult result = simulate(config, opts);
    series.flush();
    m.steps = result.steps;
    if (!result.ok) {
        m.status = "step_failure";
        m.message = result.message;
    }
    m.end_time = utc_now();
    m.wall_seconds = seconds_since(start);
    write_manifest(dir, m);
    if (result_out) *result_out = std::move(result);
    return m;
}

RunManifest epsilon_continuation(const RunConfig& config, const std::vector<double>& eps_list, int jobs,
                                 std::vector<ContinuationRow>* rows_out) {
    if (eps_list.size() < 2) throw InvalidArgument("continuation needs at least two epsilon values");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0 && eps_list[k] < 1.0)) throw InvalidArgument("epsilon values must lie in (0, 1)");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw InvalidArgument("epsilon list must be strictly decreasing");
    }
    const auto start = std::chrono::steady_clock::now();
    RunManifest m = study_manifest(config);
    fs::create_directories(config.out_dir);

    const int count = static_cast<int>(eps_list.size());
    std::vector<SimulationResult> results(static_cast<std::size_t>(count));
    std::vector<RunManifest> manifests(static_cast<std::size_t>(count));
    std::vector<double> sup_f4(static_cast<std::size_t>(count), 0.0);
    for (double eps : eps_list) m.children.push_back("runs/" + child_id("eps", eps));
    parallel_for(count, jobs, [&](int k) {
        RunConfig child = config;
        child.model.epsilon = eps_list[static_cast<std::size_t>(k)];
        child.out_dir = config.out_dir / m.children[static_cast<std::size_t>(k)];
        SimulationOptions opts;
        double& f4 = sup_f4[static_cast<std::size_t>(k)];
        opts.on_event = [&f4](const State& s, const FunctionalRecord* record, bool) {
            if (record) f4 = std::max(f4, weighted_gradient(s.v, 4.0, 3.0));
        };
        manifests[static_cast<std::size_t>(k)] = run_scenario(child, opts, &results[static_cast<std::size_t>(k)]);
    });

    std::vector<ContinuationRow> rows;
    for (int k = 0; k < count; ++k) {
        if (!manifests[static_cast<std::size_t>(k)].ok()) {
            m.status = "child_failure";
            m.message = m.children[static_cast<std::size_t>(k)] + ": " + manifests[static_cast<std::size_t>(k)].message;
        }
    }
    std::ofstream csv(config.out_dir / "continuation.csv");
    csv << "eps_a,eps_b,l1_u,l1_v,sup_F4_a,sup_F4_b\n";
    m.files.push_back("continuation.csv");
    if (m.ok()) {
        for (int k = 0; k + 1 < count; ++k) {
            const auto& a = results[static_cast<std::size_t>(k)].final_state;
            const auto& b = results[static_cast<std::size_t>(k) + 1].final_state;
            ContinuationRow r{eps_list[static_cast<std::size_t>(k)], eps_list[static_cast<std::size_t>(k) + 1],
                              l1_difference(a.u, b.u), l1_difference(a.v, b.v), sup_f4[static_cast<std::size_t>(k)],
                              sup_f4[static_cast<std::size_t>(k) + 1]};
            csv << csv_number(r.eps_a) << "," << csv_number(r.eps_b) << "," << csv_number(r.l1_u) << ","
                << csv_number(r.l1_v) << "," << csv_number(r.sup_f4_a) << "," << csv_number(r.sup_f4_b) << "\n";
            rows.push_back(r);
        }
    }
    csv.close();
    finish_study(m, config, start, json{{"study", "epsilon_continuation"}});
    if (rows_out) *rows_out = std::move(rows);
    return m;
}

RunManifest refinement_study(const RunConfig& config, const std::vector<int>& n_list, bool mms, int jobs,
                             RefinementResult* result_out) {
    if (n_list.size() < 2) throw InvalidArgument("refinement needs at least two resolutions");
    for (std::size_t k = 1; k < n_list.size(); ++k) {
        if (n_list[k] != 2 * n_list[k - 1]) throw InvalidArgument("refinement resolutions must double");
    }
    if (n_list.front() < 2) throw InvalidArgument("refinement resolutions must be >= 2");
    const auto start = std::chrono::steady_clock::now();
    RunManifest m = study_manifest(config);
    fs::create_directories(config.out_dir);
    RefinementResult res;

    const int dim = config.domain.dim;
    auto grid_for = [&](int n) { return Grid(config.domain, {n, dim == 2 ? n : 1}); };
    const Manufactured exact(config.domain, config.model);

    double kappa = 0.0;
    if (mms) {
        res.residual = manufactured_residual(exact, 10, config.seed);
        if (!(res.residual <= 1e-10)) {
            throw Error("manufactured source check failed: residual " + format_number(res.residual));
        }
        const Grid finest = grid_for(n_list.back());
        const double h = finest.min_spacing();
        kappa = stability_dt(exact.exact_state(finest, 0.0), config.model, config.step.safety) / (h * h);
    }

    auto child_config = [&](const std::string& id, int n, double dt) {
        RunConfig c = config;
        c.cells = {n, dim == 2 ? n : 1};
        c.out_dir = config.out_dir / ("runs/" + id);
        if (dt > 0.0) {
            c.step.safety = 1.0;
            c.step.dt_max = dt;
        }
        validate(c);
        return c;
    };

    const int count = static_cast<int>(n_list.size());
    std::vector<SimulationResult> runs(static_cast<std::size_t>(count));
    std::vector<RunManifest> manifests(static_cast<std::size_t>(count));
    for (int n : n_list) m.children.push_back("runs/" + child_id("n", n));

    // temporal study at the coarsest grid: dt0, dt0/2, ..., dt0/16
    constexpr int kTemporalLevels = 5;
    std::vector<double> dts;
    if (mms) {
        const Grid coarse = grid_for(n_list.front());
        const double h = coarse.min_spacing();
        const double dt_stable = stability_dt(exact.exact_state(coarse, 0.0), config.model, config.step.safety);
        double dt0 = std::min(dt_stable, kappa * h * h);
        dt0 = config.T / std::ceil(config.T / dt0);
        for (int k = 0; k < kTemporalLevels; ++k) {
            dts.push_back(dt0 / std::pow(2.0, k));
            m.children.push_back("runs/" + child_id("dt", dts.back()));
        }
    }
    std::vector<SimulationResult> truns(dts.size());
    std::vector<RunManifest> tmanifests(dts.size());

    const int total = count + static_cast<int>(dts.size());
    parallel_for(total, jobs, [&](int k) {
        SimulationOptions opts;
        if (k < count) {
            const int n = n_list[static_cast<std::size_t>(k)];
            const double h = grid_for(n).min_spacing();
            const RunConfig c = child_config(child_id("n", n), n, mms ? kappa * h * h : 0.0);
            if (mms) {
                opts.forcing = exact.forcing(c.grid());
                opts.initial = exact.exact_state(c.grid(), 0.0);
            }
            manifests[static_cast<std::size_t>(k)] = run_scenario(c, opts, &runs[static_cast<std::size_t>(k)]);
        } else {
            const std::size_t d = static_cast<std::size_t>(k - count);
            const RunConfig c = child_config(child_id("dt", dts[d]), n_list.front(), dts[d]);
            opts.forcing = exact.forcing(c.grid());
            opts.initial = exact.exact_state(c.grid(), 0.0);
            tmanifests[d] = run_scenario(c, opts, &truns[d]);
        }
    });
    for (std::size_t k = 0; k < manifests.size(); ++k) {
        if (!manifests[k].ok()) {
            m.status = "child_failure";
            m.message = m.children[k] + ": " + manifests[k].message;
        }
    }
    for (std::size_t k = 0; k < tmanifests.size(); ++k) {
        if (!tmanifests[k].ok()) {
            m.status = "child_failure";
            m.message = m.children[manifests.size() + k] + ": " + tmanifests[k].message;
        }
    }

    std::ofstream csv(config.out_dir / "refinement.csv");
    csv << "n,h,err_u,err_v,order_u,order_v\n";
    m.files.push_back("refinement.csv");
    if (m.ok()) {
        const int rows = mms ? count : count - 1;
        for (int k = 0; k < rows; ++k) {
            const State& s = runs[static_cast<std::size_t>(k)].final_state;
            const Grid& g = s.u.grid();
            RefinementRow r{n_list[static_cast<std::size_t>(k)], g.h(0), 0.0, 0.0, kNaN, kNaN};
            if (mms) {
                r.err_u = l2_difference(s.u, exact.u_field(g, s.t));
                r.err_v = l2_difference(s.v, exact.v_field(g, s.t));
            } else {
                const State& ref = runs.back().final_state;
                r.err_u = l2_difference(s.u, restrict_to(ref.u, g));
                r.err_v = l2_difference(s.v, restrict_to(ref.v, g));
            }
            if (!res.spatial.empty()) {
                r.order_u = order_between(res.spatial.back().err_u, r.err_u);
                r.order_v = order_between(res.spatial.back().err_v, r.err_v);
            }
            res.spatial.push_back(r);
            csv << r.n << "," << csv_number(r.h) << "," << csv_number(r.err_u) << "," << csv_number(r.err_v) << ","
                << csv_number(r.order_u) << "," << csv_number(r.order_v) << "\n";
        }
        if (mms) {
            std::ofstream tcsv(config.out_dir / "temporal.csv");
            tcsv << "dt,diff_u,diff_v,order_u,order_v\n";
            m.files.push_back("temporal.csv");
            for (std::size_t k = 0; k + 1 < truns.size(); ++k) {
                TemporalRow r{dts[k], l2_difference(truns[k].final_state.u, truns[k + 1].final_state.u),
                              l2_difference(truns[k].final_state.v, truns[k + 1].final_state.v), kNaN, kNaN};
                if (!res.temporal.empty()) {
                    r.order_u = order_between(res.temporal.back().diff_u, r.diff_u);
                    r.order_v = order_between(res.temporal.back().diff_v, r.diff_v);
                }
                res.temporal.push_back(r);
                tcsv << csv_number(r.dt) << "," << csv_number(r.diff_u) << "," << csv_number(r.diff_v) << ","
                     << csv_number(r.order_u) << "," << csv_number(r.order_v) << "\n";
            }
        }
    }
    csv.close();
    json extra{{"study", "refinement"}, {"manufactured", mms}};
    if (mms) {
        extra["source_residual"] = res.residual;
        extra["kappa"] = kappa;
    }
    finish_study(m, config, start, extra);
    if (result_out) *result_out = std::move(res);
    return m;
}

RunManifest l_sweep(const RunConfig& config, const std::vector<double>& l_list, int jobs,
                    std::vector<SweepRow>* rows_out) {
    if (l_list.empty()) throw InvalidArgument("sweep needs at least one l value");
    for (double l : l_list) {
        if (!(l >= 1.0 && std::isfinite(l))) throw InvalidArgument("sweep l values must be finite and >= 1");
    }
    const auto start = std::chrono::steady_clock::now();
    RunManifest m = study_manifest(config);
    fs::create_directories(config.out_dir);
    const int count = static_cast<int>(l_list.size());
    std::vector<SweepRow> rows(static_cast<std::size_t>(count));
    std::vector<RunManifest> manifests(static_cast<std::size_t>(count));
    for (double l : l_list) m.children.push_back("runs/" + child_id("l", l));

    parallel_for(count, jobs, [&](int k) {
        const std::size_t i = static_cast<std::size_t>(k);
        RunConfig c = config;
        c.model.l = l_list[i];
        c.out_dir = config.out_dir / m.children[i];
        validate(c);
        SweepRow& row = rows[i];
        row = SweepRow{l_list[i], 0.0, 0.0, 0.0, 0.0, true, true};
        SimulationOptions opts;
        opts.on_step = [&row](const State& s, const Stepper&) {
            if (!(s.u.min() > 0.0 && s.v.min() > 0.0)) row.positive = false;
        };
        opts.on_event = [&row](const State& s, const FunctionalRecord* record, bool) {
            if (!record) return;
            row.sup_lp2 = std::max(row.sup_lp2, lp_norm(s.u, 2.0));
            row.sup_lpinf = std::max(row.sup_lpinf, lp_norm(s.u, kInf));
            row.sup_f4 = std::max(row.sup_f4, weighted_gradient(s.v, 4.0, 3.0));
        };
        SimulationResult r;
        manifests[i] = run_scenario(c, opts, &r);
        row.final_mass_u = integrate(r.final_state.u);
        row.ok = r.ok;
    });
    for (std::size_t k = 0; k < manifests.size(); ++k) {
        if (!manifests[k].ok()) {
            m.status = "child_failure";
            m.message = m.children[k] + ": " + manifests[k].message;
        }
    }
    std::ofstream csv(config.out_dir / "sweep_summary.csv");
    csv << "l,sup_lp_u_2,sup_lp_u_inf,sup_F4,final_mass_u,positive,status\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const SweepRow& r = rows[k];
        csv << csv_number(r.l) << "," << csv_number(r.sup_lp2) << "," << csv_number(r.sup_lpinf) << ","
            << csv_number(r.sup_f4) << "," << csv_number(r.final_mass_u) << "," << (r.positive ? 1 : 0) << ","
            << manifests[k].status << "\n";
    }
    m.files.push_back("sweep_summary.csv");
    csv.close();
    finish_study(m, config, start, json{{"study", "l_sweep"}});
    if (rows_out) *rows_out = std::move(rows);
    return m;
}

RunManifest inequality_study(const RunConfig& config, int jobs, std::vector<IneqSummaryRow>* rows_out) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest m = study_manifest(config);
    fs::create_directories(config.out_dir);

    std::vector<int> n_list = config.ineq.n_list;
    if (n_list.empty()) n_list = {config.cells[0], 2 * config.cells[0]};
    const BandLimitedFamily family(config.seed, config.ineq.family_size, config.ineq.modes);

    struct Task {
        Inequality which;
        int n;
        double p, eta;
        std::vector<IneqReport> reports;
        double fitted = 0.0;
    };
    std::vector<Task> tasks;
    for (int n : n_list) {
        for (double p : config.ineq.p_list) {
            tasks.push_back({Inequality::sobolev_product, n, p, 0.0, {}, 0.0});
            for (double eta : config.ineq.eta_list) tasks.push_back({Inequality::gradient_coupling, n, p, eta, {}, 0.0});
        }
    }
    parallel_for(static_cast<int>(tasks.size()), jobs, [&](int k) {
        Task& t = tasks[static_cast<std::size_t>(k)];
        const Grid grid(config.domain, {t.n, config.domain.dim == 2 ? t.n : 1});
        t.fitted = fit_constant(family, grid, t.which, FitParams{t.p, t.eta}, &t.reports);
    });

    const char* term_names[] = {"bracket", "factor", "eta_term", "coupling", "mass_power", "product"};
    std::ofstream csv(config.out_dir / "ineq_report.csv");
    csv << "inequality,n,p,eta,member,field_seed,lhs";
    for (const char* name : term_names) csv << "," << name;
    csv << ",ratio,required_c,ratio_fitted\n";
    std::vector<IneqSummaryRow> summary;
    json fits = json::array();
    for (const Task& t : tasks) {
        IneqSummaryRow s{t.reports.front().inequality, t.n, t.p, t.eta, t.fitted, 0.0, true};
        for (std::size_t k = 0; k < t.reports.size(); ++k) {
            const IneqReport& r = t.reports[k];
            s.max_ratio = std::max(s.max_ratio, r.ratio);
            if (!std::isfinite(r.ratio)) s.all_finite = false;
            csv << r.inequality << "," << t.n << "," << csv_number(t.p) << "," << csv_number(t.eta) << "," << k << ","
                << r.field_seed << "," << csv_number(r.lhs);
            for (const char* name : term_names) {
                csv << ",";
                for (const auto& [term, value] : r.rhs_terms) {
                    if (term == name) csv << csv_number(value);
                }
            }
            csv << "," << csv_number(r.ratio) << "," << csv_number(r.required_c) << ","
                << csv_number(t.fitted > 0.0 ? ratio_with_constant(r, t.fitted) : kNaN) << "\n";
        }
        fits.push_back({{"inequality", s.inequality},
                        {"n", s.n},
                        {"p", s.p},
                        {"eta", s.eta},
                        {"fitted_c", number(s.fitted_c)},
                        {"max_ratio", number(s.max_ratio)},
                        {"all_finite", s.all_finite}});
        summary.push_back(s);
    }
    csv.close();
    m.files.push_back("ineq_report.csv");

    json robustness = json::array();
    for (const auto& a : summary) {
        for (const auto& b : summary) {
            if (a.inequality == b.inequality && a.p == b.p && a.eta == b.eta && b.n == 2 * a.n) {
                const double rel = std::abs(a.fitted_c - b.fitted_c) / std::max(a.fitted_c, b.fitted_c);
                robustness.push_back({{"inequality", a.inequality},
                                      {"p", a.p},
                                      {"eta", a.eta},
                                      {"n", a.n},
                                      {"n_fine", b.n},
                                      {"fitted_c", number(a.fitted_c)},
                                      {"fitted_c_fine", number(b.fitted_c)},
                                      {"relative_difference", number(rel)}});
            }
        }
    }
    json out{{"family", {{"seed", config.seed}, {"size", config.ineq.family_size}, {"modes", config.ineq.modes}}},
             {"dim", config.domain.dim},
             {"fits", fits},
             {"grid_robustness", robustness}};
    std::ofstream(config.out_dir / "ineq_summary.json") << out.dump(2) << "\n";
    m.files.push_back("ineq_summary.json");
    finish_study(m, config, start, json{{"study", "inequality"}});
    if (rows_out) *rows_out = std::move(summary);
    return m;
}

}  // namespace ndtaxis
