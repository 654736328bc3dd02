#include "ndtaxis/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ndtaxis/diagnostics.hpp"
#include "ndtaxis/errors.hpp"
#include "ndtaxis/format.hpp"
#include "ndtaxis/random.hpp"

namespace ndtaxis {

namespace {

void require_positive(const ScalarField& f, const char* name) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!(f[k] > 0.0)) {
            throw PositivityViolation(std::string("positivity violation: ") + name + " = " + format_number(f[k]) +
                                          " at cell " + std::to_string(k),
                                      k);
        }
    }
}

void require_pair(const ScalarField& phi, const ScalarField& psi, double p) {
    if (!(phi.grid() == psi.grid())) throw InvalidArgument("phi and psi live on different grids");
    if (!(p >= 1.0)) throw InvalidArgument("inequality exponent p must be >= 1, got " + format_number(p));
    require_positive(phi, "phi");
    require_positive(psi, "psi");
}

double integral_of(const ScalarField& a, const std::function<double(double)>& f) {
    double s = 0.0;
    for (double x : a.values()) s += f(x);
    return s * a.grid().cell_volume();
}

double integral_of(const ScalarField& a, const ScalarField& b, const std::function<double(double, double)>& f) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += f(a[k], b[k]);
    return s * a.grid().cell_volume();
}

}  // namespace

double IneqReport::term(const std::string& name) const {
    for (const auto& [n, value] : rhs_terms) {
        if (n == name) return value;
    }
    throw InvalidArgument("report has no term '" + name + "'");
}

IneqReport check_ineq_61(const ScalarField& phi, const ScalarField& psi, double p) {
    require_pair(phi, psi, p);
    IneqReport r;
    r.inequality = "sobolev_product";
    r.p = p;
    r.lhs = integral_of(phi, psi, [p](double f, double s) { return std::pow(f, p + 1.0) * s; });

    const auto f = phi.values();
    const auto s = psi.values();
    const double psi_term =
        face_quadratic_integral(face_gradient(psi), [&](std::size_t a, std::size_t b) { return (f[a] + f[b]) / (s[a] + s[b]); });
    const double phi_term =
        face_quadratic_integral(face_gradient(phi), [&](std::size_t a, std::size_t b) { return (s[a] + s[b]) / (f[a] + f[b]); });
    const double product = integral_of(phi, psi, [](double x, double y) { return x * y; });
    const double bracket = psi_term + phi_term + product;
    const double factor = integral_of(phi, [p](double x) { return std::pow(x, p); });
    r.rhs_terms = {{"bracket", bracket}, {"factor", factor}};
    r.ratio = r.lhs / (bracket * factor);
    r.required_c = r.ratio;
    return r;
}

IneqReport check_ineq_64(const ScalarField& phi, const ScalarField& psi, double p, double eta) {
    require_pair(phi, psi, p);
    if (!(eta > 0.0)) throw InvalidArgument("eta must be > 0, got " + format_number(eta));
    IneqReport r;
    r.inequality = "gradient_coupling";
    r.p = p;
    r.eta = eta;

    const auto f = phi.values();
    const auto s = psi.values();
    std::vector<double> lhs_weight(f.size());
    std::vector<double> eta_weight(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        lhs_weight[k] = std::pow(f[k], p + 1.0) * s[k];
        eta_weight[k] = std::pow(f[k], p - 1.0) * s[k];
    }
    r.lhs = face_quadratic_integral(face_gradient(psi), [&](std::size_t a, std::size_t b) {
        return 0.5 * (lhs_weight[a] + lhs_weight[b]);
    });
    const double eta_term = eta * face_quadratic_integral(face_gradient(phi), [&](std::size_t a, std::size_t b) {
        return 0.5 * (eta_weight[a] + eta_weight[b]);
    });

    const double psi_sup = psi.max();
    const double f4 = weighted_gradient(psi, 4.0, 3.0);
    const double phi_p1_psi = integral_of(phi, psi, [p](double x, double y) { return std::pow(x, p + 1.0) * y; });
    const double phi_mass = integrate(phi);
    const double coupling = (psi_sup + psi_sup * psi_sup * psi_sup / eta) * phi_p1_psi * f4;
    const double mass_power = psi_sup * psi_sup * std::pow(phi_mass, 2.0 * p + 1.0) * f4;
    const double product = psi_sup * psi_sup * integral_of(phi, psi, [](double x, double y) { return x * y; });
    r.rhs_terms = {{"eta_term", eta_term}, {"coupling", coupling}, {"mass_power", mass_power}, {"product", product}};

    const double c_terms = coupling + mass_power + product;
    r.ratio = r.lhs / (eta_term + c_terms);
    r.required_c = c_terms > 0.0 ? std::max(0.0, r.lhs - eta_term) / c_terms : 0.0;
    return r;
}

double ratio_with_constant(const IneqReport& report, double c) {
    if (report.inequality == "sobolev_product") return report.lhs / (c * report.term("bracket") * report.term("factor"));
    const double denom = report.term("eta_term") +
                         c * (report.term("coupling") + report.term("mass_power") + report.term("product"));
    return report.lhs / denom;
}

BandLimitedFamily::BandLimitedFamily(std::uint64_t seed, int size, int modes, double min_value, double max_value)
    : seed_(seed), size_(size), modes_(modes), min_value_(min_value), max_value_(max_value) {
    if (modes_ < 1) throw InvalidArgument("family needs at least one cosine mode");
    if (!(min_value_ > 0.0 && max_value_ > min_value_)) throw InvalidArgument("family value range must be 0 < min < max");
}

std::uint64_t BandLimitedFamily::member_seed(int k) const {
    return splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(k) + 1));
}

ScalarField BandLimitedFamily::field(const Grid& grid, std::uint64_t stream_seed) const {
    SplitMixStream rng(stream_seed);
    const int dim = grid.dim();
    const int ky_max = dim == 2 ? modes_ : 0;
    struct Mode {
        int j, k;
        double a;
    };
    std::vector<Mode> series;
    for (int j = 0; j <= modes_; ++j) {
        for (int k = 0; k <= ky_max; ++k) {
            if (j + k == 0) continue;
            series.push_back({j, k, (2.0 * rng.uniform() - 1.0) / (1.0 + j + k)});
        }
    }
    const double log_span = std::log(max_value_ / min_value_);
    double lo = std::log(min_value_) + log_span * rng.uniform();
    double hi = std::log(min_value_) + log_span * rng.uniform();
    if (lo > hi) std::swap(lo, hi);

    const double lx = grid.length(0);
    const double ly = grid.length(1);
    const double pi = std::numbers::pi;
    auto g = [&](double x, double y) {
        double s = 0.0;
        for (const auto& m : series) s += m.a * std::cos(m.j * pi * x / lx) * std::cos(m.k * pi * y / ly);
        return s;
    };

    // Range taken on a resolution-independent lattice.
    constexpr int kLattice = 96;
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -g_min;
    for (int a = 0; a <= kLattice; ++a) {
        for (int b = 0; b <= (dim == 2 ? kLattice : 0); ++b) {
            const double val = g(lx * a / kLattice, ly * b / kLattice);
            g_min = std::min(g_min, val);
            g_max = std::max(g_max, val);
        }
    }
    const double g_span = g_max > g_min ? g_max - g_min : 1.0;
    return ScalarField::sample(grid, [&](double x, double y) {
        return std::exp(lo + (hi - lo) * (g(x, y) - g_min) / g_span);
    });
}

std::pair<ScalarField, ScalarField> BandLimitedFamily::member(const Grid& grid, int k) const {
    const std::uint64_t s = member_seed(k);
    return {field(grid, splitmix64(s ^ 0x1ULL)), field(grid, splitmix64(s ^ 0x2ULL))};
}

double fit_constant(const PairGenerator& family, int count, Inequality which, const FitParams& params,
                    std::vector<IneqReport>* reports) {
    if (count <= 0) throw InvalidArgument("fit_constant: empty family");
    double best = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto [phi, psi] = family(k);
        IneqReport r = which == Inequality::sobolev_product ? check_ineq_61(phi, psi, params.p)
                                                           : check_ineq_64(phi, psi, params.p, params.eta);
        r.field_seed = static_cast<std::uint64_t>(k);
        best = std::max(best, r.required_c);
        if (reports) reports->push_back(std::move(r));
    }
    return best;
}

double fit_constant(const BandLimitedFamily& family, const Grid& grid, Inequality which, const FitParams& params,
                    std::vector<IneqReport>* reports) {
    const std::size_t first = reports ? reports->size() : 0;
    const double c = fit_constant([&](int k) { return family.member(grid, k); }, family.size(), which, params, reports);
    if (reports) {
        for (std::size_t k = first; k < reports->size(); ++k) {
            (*reports)[k].field_seed = family.member_seed(static_cast<int>(k - first));
        }
    }
    return c;
}

}  // namespace ndtaxis
