#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "ndtaxis/diagnostics.hpp"
#include "ndtaxis/errors.hpp"
#include "test_support.hpp"

using namespace ndtaxis;

namespace {

State make_state(ScalarField u, ScalarField v) { return State{std::move(u), std::move(v), 0.0, 0.0}; }

// Composite Simpson rule on [a, b]; the independent quadrature oracle.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("dissipations") {
    const Grid g = Grid::line(1.0, 256);
    const Dissipations zero = dissipations(make_state(ScalarField(g, 1.0), ScalarField(g, 1.0)));
    CHECK(zero.diss_u == 0.0);
    CHECK(zero.diss_v == 0.0);

    const ScalarField ramp = ScalarField::sample(g, [](double x, double) { return 1 + x; });
    const Dissipations d = dissipations(make_state(ramp, ScalarField(g, 1.0)));
    const double oracle = simpson([](double x) { return 1.0 / (1.0 + x); }, 0.0, 1.0);
    CHECK(oracle == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(d.diss_u - std::log(2.0)) < 1e-3);
    CHECK(d.diss_v == 0.0);

    std::mt19937_64 rng(2);
    const ScalarField v = ndtaxis::testing::random_field(g, rng, 0.5, 2.0);
    CHECK(dissipations(make_state(ScalarField(g, 3.0), v)).diss_u == 0.0);

    ScalarField bad(g, 1.0);
    bad[7] = 0.0;
    CHECK_THROWS_AS(dissipations(make_state(bad, ScalarField(g, 1.0))), PositivityViolation);
}

TEST_CASE("weighted gradient functional") {
    const Grid g = Grid::line(1.0, 256);
    const State flat = make_state(ScalarField(g, 1.0), ScalarField(g, 2.5));
    CHECK(weighted_gradient(flat, 4.0, 3.0) == 0.0);
    CHECK(weighted_gradient(flat, 2.5, 0.5) == 0.0);

    const State ramp = make_state(ScalarField(g, 1.0), ScalarField::sample(g, [](double x, double) { return 1 + x; }));
    CHECK(simpson([](double x) { return std::pow(1 + x, -3.0); }, 0, 1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(simpson([](double x) { return std::pow(1 + x, -5.0); }, 0, 1) == doctest::Approx(0.234375).epsilon(1e-12));
    CHECK(std::abs(weighted_gradient(ramp, 4.0, 3.0) - 0.375) < 1e-3);
    CHECK(std::abs(weighted_gradient(ramp, 6.0, 5.0) - 0.234375) < 1e-3);

    CHECK_THROWS_AS(weighted_gradient(ramp, 2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(weighted_gradient(ramp, 4.0, 4.0), InvalidArgument);
    CHECK_THROWS_AS(weighted_gradient(ramp, 4.0, 0.0), InvalidArgument);

    // 2D: v = 1 + x + y on the unit square, |grad v|^4 / v^3 = 4 / (1+x+y)^3.
    const Grid g2 = Grid::rectangle(1.0, 1.0, 128, 128);
    const State plane = make_state(ScalarField(g2, 1.0),
                                   ScalarField::sample(g2, [](double x, double y) { return 1 + x + y; }));
    const double exact = simpson([](double y) {
        return simpson([y](double x) { return 4.0 / std::pow(1 + x + y, 3.0); }, 0, 1, 400);
    }, 0, 1, 400);
    CHECK(std::abs(weighted_gradient(plane, 4.0, 3.0) - exact) < 1e-3);
}

TEST_CASE("energy functional cases") {
    const Grid g = Grid::line(1.0, 32);
    ModelParams p;
    p.b = 1.0;
    const State ones = make_state(ScalarField(g, 1.0), ScalarField(g, 1.0));
    p.l = 2.0;
    CHECK(energy_G(ones, p) == doctest::Approx(0.0));
    p.l = 2.5;
    CHECK(energy_G(ones, p) == doctest::Approx(-16.0).epsilon(1e-13));
    p.l = 3.0;
    CHECK(energy_G(make_state(ScalarField(g, std::exp(1.0)), ScalarField(g, 1.0)), p) == doctest::Approx(-4.0).epsilon(1e-13));
    p.l = 1.5;  // 4 / ((-1.5)(-0.5)) * int u^{1.5}
    CHECK(energy_G(make_state(ScalarField(g, 4.0), ScalarField(g, 1.0)), p) == doctest::Approx(16.0 / 3.0 * 8.0).epsilon(1e-13));
    p.l = 4.0;  // 4 / (1 * 2) * int u^{-1}
    p.b = 0.5;
    CHECK(energy_G(make_state(ScalarField(g, 2.0), ScalarField(g, 1.0)), p) == doctest::Approx(0.5).epsilon(1e-13));

    // l = 1 reports F4 alone and flags the record.
    p.l = 1.0;
    const State ramp = make_state(ScalarField(g, 1.0), ScalarField::sample(g, [](double x, double) { return 1 + x; }));
    CHECK(energy_G(ramp, p) == doctest::Approx(weighted_gradient(ramp, 4.0, 3.0)));
    const FunctionalRecord r = full_record(ramp, p, DiagnosticsSpec{});
    CHECK_FALSE(r.energy_G_defined);
}

TEST_CASE("full record") {
    const Grid g = Grid::rectangle(1.0, 1.0, 8, 8);
    ModelParams p;
    const FunctionalRecord r = full_record(make_state(ScalarField(g, 1.0), ScalarField(g, 1.0)), p, DiagnosticsSpec{});
    CHECK(r.mass_u == doctest::Approx(1.0));
    CHECK(r.mass_v == doctest::Approx(1.0));
    CHECK(r.diss_u == 0.0);
    CHECK(r.diss_v == 0.0);
    CHECK(r.grad_v_sq == 0.0);
    CHECK(r.grad_v_sq_over_v == 0.0);
    for (const auto& [qa, value] : r.weighted_q) CHECK(value == 0.0);
    CHECK(r.weighted_L2 == doctest::Approx(1.0));
    CHECK(r.entropy == doctest::Approx(0.0));  // l = 2: int ln u
    CHECK(lp_of(r, std::numeric_limits<double>::infinity()) == 1.0);

    const FunctionalRecord r2 = full_record(make_state(ScalarField(g, 2.0), ScalarField(g, 3.0)), p, DiagnosticsSpec{});
    CHECK(r2.weighted_L2 == doctest::Approx(12.0));
    CHECK(lp_of(r2, 2.0) == doctest::Approx(2.0));
    CHECK(lp_of(r2, 4.0) == doctest::Approx(2.0));

    p.l = 3.0;  // int u^{2-l} = int 1/u
    CHECK(full_record(make_state(ScalarField(g, 2.0), ScalarField(g, 3.0)), p, DiagnosticsSpec{}).entropy ==
          doctest::Approx(0.5));
}

TEST_CASE("records on random states satisfy sign invariants") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        const Grid g = trial % 2 ? Grid::line(1.0, 48) : Grid::rectangle(1.0, 1.0, 12, 12);
        ModelParams p;
        p.l = 1.0 + 0.1 * trial;
        const FunctionalRecord r = full_record(
            make_state(ndtaxis::testing::random_field(g, rng, 0.05, 3.0), ndtaxis::testing::random_field(g, rng, 0.05, 3.0)),
            p, DiagnosticsSpec{});
        CHECK(r.diss_u >= 0.0);
        CHECK(r.diss_v >= 0.0);
        CHECK(r.grad_v_sq >= 0.0);
        CHECK(r.grad_v_sq_over_v >= 0.0);
        CHECK(weighted_of(r, 4.0, 3.0) >= 0.0);
        CHECK(weighted_of(r, 6.0, 5.0) >= 0.0);
        CHECK(r.weighted_L2 >= 0.0);
        CHECK(r.sup_v >= r.inf_v);
    }
}

TEST_CASE("functionals converge at second order on smooth profiles") {
    // u = 1 + x, v = 1 + x^2 on (0, 1)
    auto u_f = [](double x) { return 1 + x; };
    auto v_f = [](double x) { return 1 + x * x; };
    struct Case {
        const char* name;
        std::function<double(const FunctionalRecord&)> get;
        std::function<double(double)> integrand;
    };
    const Case cases[] = {
        {"diss_u", [](const FunctionalRecord& r) { return r.diss_u; },
         [&](double x) { return v_f(x) / u_f(x); }},
        {"diss_v", [](const FunctionalRecord& r) { return r.diss_v; },
         [&](double x) { return u_f(x) / v_f(x) * 4 * x * x; }},
        {"grad_v_sq", [](const FunctionalRecord& r) { return r.grad_v_sq; }, [](double x) { return 4 * x * x; }},
        {"grad_v_sq_over_v", [](const FunctionalRecord& r) { return r.grad_v_sq_over_v; },
         [&](double x) { return 4 * x * x / v_f(x); }},
        {"F4", [](const FunctionalRecord& r) { return weighted_of(r, 4.0, 3.0); },
         [&](double x) { return std::pow(2 * x, 4) / std::pow(v_f(x), 3); }},
        {"F6", [](const FunctionalRecord& r) { return weighted_of(r, 6.0, 5.0); },
         [&](double x) { return std::pow(2 * x, 6) / std::pow(v_f(x), 5); }},
        {"weighted_L2", [](const FunctionalRecord& r) { return r.weighted_L2; },
         [&](double x) { return u_f(x) * u_f(x) * v_f(x); }},
    };
    ModelParams p;
    for (const Case& c : cases) {
        CAPTURE(c.name);
        const double exact = simpson(c.integrand, 0, 1);
        double prev_err = 0.0;
        for (int n : {64, 128, 256}) {
            const Grid g = Grid::line(1.0, n);
            const State s = make_state(ScalarField::sample(g, [&](double x, double) { return u_f(x); }),
                                       ScalarField::sample(g, [&](double x, double) { return v_f(x); }));
            const double err = std::abs(c.get(full_record(s, p, DiagnosticsSpec{})) - exact);
            if (prev_err > 0.0) {
                const double order = std::log2(prev_err / err);
                CHECK(order > 1.8);
                CHECK(order < 2.3);
            }
            prev_err = err;
        }
    }
}

TEST_CASE("csv layout") {
    DiagnosticsSpec spec;
    spec.p_list = {2.0, 1.5};
    spec.q_alpha = {{4.0, 3.0}, {2.5, 1.5}};
    const std::string header = csv_header(spec);
    CHECK(header.find("wq_4_3") != std::string::npos);
    CHECK(header.find("wq_2.5_1.5") != std::string::npos);
    CHECK(header.find("lp_u_2,lp_u_1.5,lp_u_inf") != std::string::npos);
    const Grid g = Grid::line(1.0, 8);
    const FunctionalRecord r = full_record(make_state(ScalarField(g, 1.0), ScalarField(g, 1.0)), ModelParams{}, spec);
    const std::string row = csv_row(r);
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
    CHECK(record_columns(spec).size() == static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1));
}
