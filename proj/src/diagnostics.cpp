#include "ndtaxis/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "ndtaxis/errors.hpp"
#include "ndtaxis/format.hpp"

namespace ndtaxis {

namespace {

constexpr double kCaseTolerance = 1e-12;

void require_positive_field(const ScalarField& f, const char* name) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!(f[k] > 0.0)) {
            throw PositivityViolation(std::string("positivity violation: ") + name + " = " + format_number(f[k]) +
                                          " at cell " + std::to_string(k),
                                      k);
        }
    }
}

std::string column_number(double x) {
    if (std::isinf(x)) return "inf";
    return format_number(x);
}

}  // namespace

void require_positive(const State& state) {
    require_positive_field(state.u, "u");
    require_positive_field(state.v, "v");
}

Dissipations dissipations(const State& state) {
    require_positive(state);
    const auto u = state.u.values();
    const auto v = state.v.values();
    Dissipations d;
    d.diss_u = face_quadratic_integral(face_gradient(state.u), [&](std::size_t a, std::size_t b) {
        return (v[a] + v[b]) / (u[a] + u[b]);
    });
    d.diss_v = face_quadratic_integral(face_gradient(state.v), [&](std::size_t a, std::size_t b) {
        return (u[a] + u[b]) / (v[a] + v[b]);
    });
    return d;
}

double weighted_gradient(const ScalarField& v, double q, double alpha) {
    if (!(q > 2.0)) throw InvalidArgument("weighted_gradient: q must exceed 2, got " + format_number(q));
    if (!(alpha > 0.0 && alpha < q)) {
        throw InvalidArgument("weighted_gradient: alpha must lie in (0, q), got " + format_number(alpha));
    }
    require_positive_field(v, "v");
    const ScalarField g2 = cell_gradient_squared(v);
    const double half_q = 0.5 * q;
    double sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (g2[k] == 0.0) continue;
        sum += std::pow(g2[k], half_q) / std::pow(v[k], alpha);
    }
    return sum * v.grid().cell_volume();
}

double weighted_gradient(const State& state, double q, double alpha) {
    return weighted_gradient(state.v, q, alpha);
}

double energy_G(const State& state, const ModelParams& params) {
    require_positive(state);
    const double l = params.l;
    const double b = params.b;
    const double f4 = weighted_gradient(state.v, 4.0, 3.0);
    const auto u = state.u.values();
    const double vol = state.u.grid().cell_volume();
    if (std::abs(l - 2.0) < kCaseTolerance) {
        double s = 0.0;
        for (double x : u) s += x * std::log(x);
        return 4.0 * b * s * vol + f4;
    }
    if (std::abs(l - 3.0) < kCaseTolerance) {
        double s = 0.0;
        for (double x : u) s += std::log(x);
        return -4.0 * b * s * vol + f4;
    }
    if (l <= 1.0) return f4;
    double s = 0.0;
    for (double x : u) s += std::pow(x, 3.0 - l);
    s *= vol;
    if (l < 2.0 || l > 3.0) return 4.0 * b / ((l - 3.0) * (l - 2.0)) * s + f4;
    return -4.0 * b / ((3.0 - l) * (l - 2.0)) * s + f4;
}

double entropy(const State& state, const ModelParams& params) {
    require_positive(state);
    const auto u = state.u.values();
    double s = 0.0;
    if (std::abs(params.l - 2.0) < kCaseTolerance) {
        for (double x : u) s += std::log(x);
    } else {
        const PowerEvaluator pow_entropy(2.0 - params.l);
        for (double x : u) s += pow_entropy(x);
    }
    return s * state.u.grid().cell_volume();
}

FunctionalRecord full_record(const State& state, const ModelParams& params, const DiagnosticsSpec& spec) {
    require_positive(state);
    FunctionalRecord r;
    r.t = state.t;
    r.mass_u = integrate(state.u);
    r.mass_v = integrate(state.v);
    r.sup_u = state.u.max();
    r.sup_v = state.v.max();
    r.inf_v = state.v.min();
    r.cumulative_uv = state.cumulative_uv;

    const Dissipations d = dissipations(state);
    r.diss_u = d.diss_u;
    r.diss_v = d.diss_v;
    const FaceField gv = face_gradient(state.v);
    const auto v = state.v.values();
    r.grad_v_sq = face_quadratic_integral(gv, [](std::size_t, std::size_t) { return 1.0; });
    r.grad_v_sq_over_v =
        face_quadratic_integral(gv, [&](std::size_t a, std::size_t b) { return 2.0 / (v[a] + v[b]); });

    for (const auto& qa : spec.q_alpha) r.weighted_q.emplace_back(qa, weighted_gradient(state.v, qa.q, qa.alpha));

    const auto u = state.u.values();
    double l2w = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) l2w += u[k] * u[k] * v[k];
    r.weighted_L2 = l2w * state.u.grid().cell_volume();

    for (double p : spec.p_list) r.lp_u.emplace_back(p, lp_norm(state.u, p));
    r.lp_u.emplace_back(std::numeric_limits<double>::infinity(), lp_norm(state.u, std::numeric_limits<double>::infinity()));

    r.entropy = entropy(state, params);
    r.energy_G = energy_G(state, params);
    r.energy_G_defined = params.l > 1.0;
    return r;
}

std::vector<std::string> record_columns(const DiagnosticsSpec& spec) {
    std::vector<std::string> cols{"t",      "mass_u",  "mass_v",    "sup_u",         "sup_v",
                                  "inf_v",  "cumulative_uv", "diss_u", "diss_v",     "grad_v_sq",
                                  "grad_v_sq_over_v", "weighted_L2"};
    for (const auto& qa : spec.q_alpha) cols.push_back("wq_" + column_number(qa.q) + "_" + column_number(qa.alpha));
    for (double p : spec.p_list) cols.push_back("lp_u_" + column_number(p));
    cols.push_back("lp_u_inf");
    cols.push_back("entropy");
    cols.push_back("energy_G");
    cols.push_back("energy_G_defined");
    return cols;
}

std::string csv_header(const DiagnosticsSpec& spec) {
    std::string out;
    for (const auto& c : record_columns(spec)) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

std::string csv_row(const FunctionalRecord& r) {
    std::string out;
    auto put = [&out](double x) {
        if (!out.empty()) out += ',';
        out += format_number(x);
    };
    put(r.t);
    put(r.mass_u);
    put(r.mass_v);
    put(r.sup_u);
    put(r.sup_v);
    put(r.inf_v);
    put(r.cumulative_uv);
    put(r.diss_u);
    put(r.diss_v);
    put(r.grad_v_sq);
    put(r.grad_v_sq_over_v);
    put(r.weighted_L2);
    for (const auto& [qa, value] : r.weighted_q) put(value);
    for (const auto& [p, value] : r.lp_u) put(value);
    put(r.entropy);
    put(r.energy_G);
    out += r.energy_G_defined ? ",1" : ",0";
    return out;
}

double lp_of(const FunctionalRecord& record, double p) {
    for (const auto& [pp, value] : record.lp_u) {
        if (pp == p) return value;
    }
    throw InvalidArgument("record has no lp_u entry for p = " + column_number(p));
}

double weighted_of(const FunctionalRecord& record, double q, double alpha) {
    for (const auto& [qa, value] : record.weighted_q) {
        if (qa.q == q && qa.alpha == alpha) return value;
    }
    throw InvalidArgument("record has no weighted_q entry for (" + column_number(q) + ", " + column_number(alpha) + ")");
}

}  // namespace ndtaxis
