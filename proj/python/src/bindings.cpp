#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ndtaxis/config.hpp"
#include "ndtaxis/diagnostics.hpp"
#include "ndtaxis/errors.hpp"
#include "ndtaxis/experiments.hpp"
#include "ndtaxis/field_io.hpp"
#include "ndtaxis/inequality_lab.hpp"
#include "ndtaxis/manufactured.hpp"
#include "ndtaxis/presets.hpp"
#include "ndtaxis/stepper.hpp"

namespace py = pybind11;
using namespace ndtaxis;

namespace {

// Fields cross the boundary as arrays shaped (ny, nx) in 2D and (nx,) in 1D.
py::array_t<double> to_array(const ScalarField& f) {
    const Grid& g = f.grid();
    std::vector<py::ssize_t> shape;
    if (g.dim() == 2) shape = {g.n(1), g.n(0)};
    else shape = {g.n(0)};
    py::array_t<double> out(shape);
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

ScalarField from_array(const Grid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (static_cast<std::size_t>(a.size()) != g.size()) {
        throw InvalidArgument("array has " + std::to_string(a.size()) + " values, grid has " + std::to_string(g.size()));
    }
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict record_dict(const FunctionalRecord& r, const DiagnosticsSpec& spec) {
    py::dict d;
    const auto cols = record_columns(spec);
    std::size_t k = 0;
    // values in column order
    std::vector<double> v{r.t, r.mass_u, r.mass_v, r.sup_u, r.sup_v, r.inf_v, r.cumulative_uv, r.diss_u, r.diss_v,
                          r.grad_v_sq, r.grad_v_sq_over_v, r.weighted_L2};
    for (const auto& [qa, x] : r.weighted_q) v.push_back(x);
    for (const auto& [p, x] : r.lp_u) v.push_back(x);
    v.push_back(r.entropy);
    v.push_back(r.energy_G);
    for (; k < v.size(); ++k) d[py::str(cols[k])] = v[k];
    d[py::str(cols[k])] = r.energy_G_defined;
    return d;
}

py::dict report_dict(const IneqReport& r) {
    py::dict terms;
    for (const auto& [name, value] : r.rhs_terms) terms[py::str(name)] = value;
    py::dict d;
    d["inequality"] = r.inequality;
    d["lhs"] = r.lhs;
    d["rhs_terms"] = terms;
    d["ratio"] = r.ratio;
    d["required_c"] = r.required_c;
    d["p"] = r.p;
    d["eta"] = r.eta;
    d["field_seed"] = r.field_seed;
    return d;
}

py::dict manifest_dict(const RunManifest& m) {
    py::dict d;
    d["status"] = m.status;
    d["message"] = m.message;
    d["files"] = m.files;
    d["children"] = m.children;
    d["steps"] = m.steps;
    d["wall_seconds"] = m.wall_seconds;
    d["version"] = m.version;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-volume simulator for a doubly degenerate nutrient-taxis system";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<InvalidInitialData>(m, "InvalidInitialData", base.ptr());
    py::register_exception<PositivityViolation>(m, "PositivityViolation", base.ptr());
    py::register_exception<StepFailure>(m, "StepFailure", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Grid>(m, "Grid")
        .def_static("line", &Grid::line, py::arg("length"), py::arg("n"))
        .def_static("rectangle", &Grid::rectangle, py::arg("lx"), py::arg("ly"), py::arg("nx"), py::arg("ny"))
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("size", &Grid::size)
        .def_property_readonly("cell_volume", &Grid::cell_volume)
        .def("n", &Grid::n)
        .def("h", &Grid::h)
        .def("length", &Grid::length)
        .def("centers", [](const Grid& g, int axis) {
            py::array_t<double> out(g.n(axis));
            for (int i = 0; i < g.n(axis); ++i) out.mutable_at(i) = g.center(axis, i);
            return out;
        })
        .def("__repr__", [](const Grid& g) {
            return "Grid(dim=" + std::to_string(g.dim()) + ", nx=" + std::to_string(g.n(0)) +
                   ", ny=" + std::to_string(g.n(1)) + ")";
        });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double l, double epsilon, double b, const std::string& face_mean) {
                 ModelParams p{l, epsilon, b, face_mean_from_string(face_mean)};
                 p.validate();
                 return p;
             }),
             py::arg("l") = 2.0, py::arg("epsilon") = 0.01, py::arg("b") = 1.0, py::arg("face_mean") = "arithmetic")
        .def_readwrite("l", &ModelParams::l)
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("b", &ModelParams::b);

    py::class_<StepControl>(m, "StepControl")
        .def(py::init([](double safety, double dt_min, int max_halvings, const std::string& scheme, double dt_max) {
                 StepControl c{safety, dt_min, max_halvings, scheme_from_string(scheme), dt_max};
                 c.validate();
                 return c;
             }),
             py::arg("safety") = 0.4, py::arg("dt_min") = 1e-14, py::arg("max_halvings") = 40,
             py::arg("scheme") = "explicit", py::arg("dt_max") = std::numeric_limits<double>::infinity())
        .def_readwrite("safety", &StepControl::safety)
        .def_readwrite("dt_max", &StepControl::dt_max);

    py::class_<State>(m, "State")
        .def(py::init([](const Grid& g, py::array_t<double> u, py::array_t<double> v, double t) {
                 return State{from_array(g, u), from_array(g, v), t, 0.0};
             }),
             py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("t") = 0.0)
        .def_property_readonly("u", [](const State& s) { return to_array(s.u); })
        .def_property_readonly("v", [](const State& s) { return to_array(s.v); })
        .def_property_readonly("grid", [](const State& s) { return s.u.grid(); })
        .def_readonly("t", &State::t)
        .def_readonly("cumulative_uv", &State::cumulative_uv);

    m.def("regularize_initial",
          [](const Grid& g, py::array_t<double> u0, py::array_t<double> v0, const ModelParams& p) {
              return regularize_initial(from_array(g, u0), from_array(g, v0), p);
          },
          py::arg("grid"), py::arg("u0"), py::arg("v0"), py::arg("params"));
    m.def("rhs",
          [](const State& s, const ModelParams& p) {
              const Rates r = rhs(s, p);
              return py::make_tuple(to_array(r.du), to_array(r.dv));
          },
          py::arg("state"), py::arg("params"));
    m.def("stability_dt", py::overload_cast<const State&, const ModelParams&, double>(&stability_dt), py::arg("state"),
          py::arg("params"), py::arg("safety") = 0.4);
    m.def("step", &step, py::arg("state"), py::arg("params"), py::arg("control") = StepControl{});
    m.def("run_until",
          [](const State& s, double t_end, const ModelParams& p, const StepControl& c,
             const std::function<void(const State&)>& observer) {
              if (!observer) {
                  py::gil_scoped_release release;
                  return run_until(s, t_end, p, c);
              }
              return run_until(s, t_end, p, c, [&observer](const State& st) { observer(st); });
          },
          py::arg("state"), py::arg("t_end"), py::arg("params"), py::arg("control") = StepControl{},
          py::arg("observer") = std::function<void(const State&)>{});

    m.def("integrate", [](const Grid& g, py::array_t<double> f) { return integrate(from_array(g, f)); });
    m.def("lp_norm", [](const Grid& g, py::array_t<double> f, double p) { return lp_norm(from_array(g, f), p); });
    m.def("laplacian", [](const Grid& g, py::array_t<double> f) { return to_array(laplacian(from_array(g, f))); });

    m.def("dissipations", [](const State& s) {
        const Dissipations d = dissipations(s);
        return py::make_tuple(d.diss_u, d.diss_v);
    });
    m.def("weighted_gradient", py::overload_cast<const State&, double, double>(&weighted_gradient), py::arg("state"),
          py::arg("q"), py::arg("alpha"));
    m.def("energy_G", &energy_G, py::arg("state"), py::arg("params"));
    m.def("entropy", &entropy, py::arg("state"), py::arg("params"));
    m.def("full_record",
          [](const State& s, const ModelParams& p, const std::vector<double>& p_list,
             const std::vector<std::pair<double, double>>& q_alpha) {
              DiagnosticsSpec spec;
              spec.p_list = p_list;
              spec.q_alpha.clear();
              for (const auto& [q, a] : q_alpha) spec.q_alpha.push_back({q, a});
              return record_dict(full_record(s, p, spec), spec);
          },
          py::arg("state"), py::arg("params"), py::arg("p_list") = std::vector<double>{2.0, 4.0},
          py::arg("q_alpha") = std::vector<std::pair<double, double>>{{4.0, 3.0}, {6.0, 5.0}});

    m.def("check_ineq_61",
          [](const Grid& g, py::array_t<double> phi, py::array_t<double> psi, double p) {
              return report_dict(check_ineq_61(from_array(g, phi), from_array(g, psi), p));
          },
          py::arg("grid"), py::arg("phi"), py::arg("psi"), py::arg("p"));
    m.def("check_ineq_64",
          [](const Grid& g, py::array_t<double> phi, py::array_t<double> psi, double p, double eta) {
              return report_dict(check_ineq_64(from_array(g, phi), from_array(g, psi), p, eta));
          },
          py::arg("grid"), py::arg("phi"), py::arg("psi"), py::arg("p"), py::arg("eta"));
    m.def("fit_constant",
          [](const Grid& g, const std::string& which, double p, double eta, std::uint64_t seed, int size, int modes) {
              Inequality w;
              if (which == "sobolev_product") w = Inequality::sobolev_product;
              else if (which == "gradient_coupling") w = Inequality::gradient_coupling;
              else throw InvalidArgument("which must be 'sobolev_product' or 'gradient_coupling'");
              py::gil_scoped_release release;
              return fit_constant(BandLimitedFamily(seed, size, modes), g, w, FitParams{p, eta});
          },
          py::arg("grid"), py::arg("which"), py::arg("p") = 1.0, py::arg("eta") = 1.0, py::arg("seed") = 0,
          py::arg("size") = 100, py::arg("modes") = 3);
    m.def("family_member",
          [](const Grid& g, std::uint64_t seed, int k, int modes) {
              const auto [phi, psi] = BandLimitedFamily(seed, k + 1, modes).member(g, k);
              return py::make_tuple(to_array(phi), to_array(psi));
          },
          py::arg("grid"), py::arg("seed"), py::arg("k"), py::arg("modes") = 3);

    py::class_<RunConfig>(m, "RunConfig")
        .def_property_readonly("grid", &RunConfig::grid)
        .def_readonly("T", &RunConfig::T)
        .def_readonly("seed", &RunConfig::seed)
        .def_readonly("model", &RunConfig::model)
        .def_property("out_dir", [](const RunConfig& c) { return c.out_dir; },
                      [](RunConfig& c, const std::filesystem::path& p) { c.out_dir = p; })
        .def("to_text", &to_text);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("make_initial",
          [](const RunConfig& c) {
              const auto [u0, v0] = make_initial(c.init, c.grid(), c.seed);
              return py::make_tuple(to_array(u0), to_array(v0));
          },
          py::arg("config"));
    m.def("run_scenario",
          [](const RunConfig& c) {
              RunManifest man;
              {
                  py::gil_scoped_release release;
                  man = run_scenario(c);
              }
              return manifest_dict(man);
          },
          py::arg("config"));
    m.def("manufactured_residual",
          [](const Grid& g, const ModelParams& p, int points, std::uint64_t seed) {
              return manufactured_residual(Manufactured(g.domain(), p), points, seed);
          },
          py::arg("grid"), py::arg("params"), py::arg("points") = 10, py::arg("seed") = 0);
    m.def("read_field", [](const std::filesystem::path& p) {
        const ScalarField f = read_field(p);
        return py::make_tuple(f.grid(), to_array(f));
    });
    m.attr("__version__") = NDTAXIS_VERSION;
}
