#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ndtaxis/errors.hpp"
#include "ndtaxis/field_io.hpp"
#include "ndtaxis/grid.hpp"
#include "test_support.hpp"

using namespace ndtaxis;
using ndtaxis::testing::random_field;

namespace {

// Mirror-ghost 5-point stencil written out cell by cell, independent of the
// face-flux assembly in laplacian().
double ghost_stencil(const ScalarField& f, int i, int j) {
    const Grid& g = f.grid();
    auto value = [&](int a, int b) {
        a = std::clamp(a, 0, g.n(0) - 1);
        b = std::clamp(b, 0, g.n(1) - 1);
        return f.at(a, b);
    };
    double lap = (value(i + 1, j) - 2 * value(i, j) + value(i - 1, j)) / (g.h(0) * g.h(0));
    if (g.dim() == 2) lap += (value(i, j + 1) - 2 * value(i, j) + value(i, j - 1)) / (g.h(1) * g.h(1));
    return lap;
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid g = Grid::rectangle(2.0, 0.3, 16, 7);
    CHECK(g.size() == 16u * 7u);
    CHECK(g.h(0) * g.n(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.h(1) * g.n(1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(g.domain().volume() == doctest::Approx(0.6));
    CHECK_THROWS_AS(Grid::line(1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(Grid::line(-1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(Grid(Domain{3, {1.0, 1.0}}, {4, 4}), InvalidArgument);
    CHECK_THROWS_AS(ScalarField(Grid::line(1.0, 4), std::vector<double>(3, 0.0)), InvalidArgument);
}

TEST_CASE("integrate") {
    CHECK(integrate(ScalarField(Grid::line(1.0, 16), 2.0)) == doctest::Approx(2.0).epsilon(1e-15));
    const Grid g = Grid::line(1.0, 100);
    CHECK(integrate(ScalarField::sample(g, [](double x, double) { return x; })) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(integrate(ScalarField(Grid::rectangle(1.0, 1.0, 32, 32), 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("integrate is linear") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Grid g = trial % 2 ? Grid::line(1.7, 37) : Grid::rectangle(1.0, 2.5, 9, 13);
        const ScalarField f = random_field(g, rng);
        const ScalarField h = random_field(g, rng);
        const double a = 1.5, b = -0.25;
        const double lhs = integrate(a * f + b * h);
        const double rhs = a * integrate(f) + b * integrate(h);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("face gradient") {
    const Grid g = Grid::line(1.0, 10);
    const FaceField flat = face_gradient(ScalarField(g, 3.5));
    for (double x : flat.normal[0]) CHECK(x == 0.0);

    const FaceField slope = face_gradient(ScalarField::sample(g, [](double x, double) { return x; }));
    REQUIRE(slope.normal[0].size() == 11u);
    CHECK(slope.normal[0].front() == 0.0);
    CHECK(slope.normal[0].back() == 0.0);
    for (int i = 1; i < 10; ++i) CHECK(slope.normal[0][static_cast<std::size_t>(i)] == doctest::Approx(1.0).epsilon(1e-12));

    // Affine data in 2D: exact slopes on every interior face of each axis.
    const Grid g2 = Grid::rectangle(2.0, 1.0, 8, 6);
    const FaceField grad2 = face_gradient(ScalarField::sample(g2, [](double x, double y) { return 3 * x - 2 * y + 1; }));
    for (int j = 0; j < 6; ++j) {
        for (int i = 1; i < 8; ++i) CHECK(grad2.normal[0][grad2.face_index(0, i, j)] == doctest::Approx(3.0).epsilon(1e-12));
    }
    for (int j = 1; j < 6; ++j) {
        for (int i = 0; i < 8; ++i) CHECK(grad2.normal[1][grad2.face_index(1, i, j)] == doctest::Approx(-2.0).epsilon(1e-12));
    }
}

TEST_CASE("divergence theorem: integral of div(grad f) vanishes") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Grid g = trial % 2 ? Grid::line(1.0, 64) : Grid::rectangle(1.0, 1.0, 24, 17);
        const ScalarField f = random_field(g, rng);
        CHECK(std::abs(integrate(divergence(face_gradient(f)))) <= 1e-12);
        CHECK(std::abs(integrate(laplacian(f))) <= 1e-12);
    }
}

TEST_CASE("laplacian stencil") {
    const Grid g = Grid::line(1.0, 10);
    const ScalarField c(g, 4.2);
    const ScalarField lap_c = laplacian(c);
    for (double x : lap_c.values()) CHECK(x == 0.0);

    const ScalarField lap = laplacian(ScalarField::sample(g, [](double x, double) { return x; }));
    CHECK(lap[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(lap[9] == doctest::Approx(-10.0).epsilon(1e-12));
    for (int i = 1; i < 9; ++i) CHECK(std::abs(lap[static_cast<std::size_t>(i)]) < 1e-12);

    std::mt19937_64 rng(3);
    for (const Grid& grid : {Grid::line(2.0, 13), Grid::rectangle(1.0, 3.0, 7, 9)}) {
        const ScalarField f = random_field(grid, rng);
        const ScalarField l = laplacian(f);
        for (int j = 0; j < grid.n(1); ++j) {
            for (int i = 0; i < grid.n(0); ++i) {
                CHECK(l.at(i, j) == doctest::Approx(ghost_stencil(f, i, j)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("lp norms") {
    const Grid g = Grid::line(1.0, 64);
    CHECK(lp_norm(ScalarField(g, 3.0), 2.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(lp_norm(ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 1.0 : 0.0; }), 1.0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    ScalarField spike(g, 1.0);
    spike[17] = -7.25;
    spike[3] = 7.0;
    CHECK(lp_norm(spike, std::numeric_limits<double>::infinity()) == 7.25);
    CHECK_THROWS_AS(lp_norm(spike, 0.5), InvalidArgument);
}

TEST_CASE("lp norm is nondecreasing in p on unit-volume domains") {
    std::mt19937_64 rng(99);
    const double ps[] = {1.0, 1.5, 2.0, 3.0, 4.0, 8.0, std::numeric_limits<double>::infinity()};
    for (int trial = 0; trial < 100; ++trial) {
        const Grid g = trial % 2 ? Grid::line(1.0, 40) : Grid::rectangle(0.5, 2.0, 10, 12);
        const ScalarField f = random_field(g, rng, -3.0, 5.0);
        double prev = 0.0;
        for (double p : ps) {
            const double norm = lp_norm(f, p);
            CHECK(norm >= prev * (1 - 1e-14));
            prev = norm;
        }
    }
}

TEST_CASE("cell gradient squared and face quadratic integral") {
    const Grid g = Grid::line(1.0, 256);
    // int_0^1 |d/dx (1+x)^2|^2 dx = int 4(1+x)^2 = 4 * 7/3
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return (1 + x) * (1 + x); });
    const double face = face_quadratic_integral(face_gradient(f), [](std::size_t, std::size_t) { return 1.0; });
    CHECK(face == doctest::Approx(28.0 / 3.0).epsilon(1e-4));
    CHECK(integrate(cell_gradient_squared(f)) == doctest::Approx(28.0 / 3.0).epsilon(1e-4));

    // Face volumes tile the domain: weight 1 and unit gradient integrate to |Omega|.
    const Grid g2 = Grid::rectangle(2.0, 1.5, 5, 4);
    const ScalarField ramp = ScalarField::sample(g2, [](double x, double) { return x; });
    CHECK(face_quadratic_integral(face_gradient(ramp), [](std::size_t, std::size_t) { return 1.0; }) ==
          doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("field snapshots round-trip bit-exactly") {
    std::mt19937_64 rng(2024);
    const Grid grids[] = {Grid::line(0.1 * 3, 17), Grid::rectangle(1.0 / 3.0, 2.718281828459045, 5, 8)};
    for (const Grid& g : grids) {
        ScalarField f = random_field(g, rng, -1e3, 1e3);
        f[0] = std::numeric_limits<double>::denorm_min();
        f[1] = -0.0;
        std::stringstream buffer;
        write_field(buffer, f);
        const ScalarField back = read_field(buffer);
        CHECK(back.grid() == g);
        for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::signbit(back[k]) == std::signbit(f[k]));
        CHECK(std::equal(f.values().begin(), f.values().end(), back.values().begin()));
    }
    std::stringstream header_only("1 4 1\n");
    CHECK_THROWS_AS(read_field(header_only), Error);
    std::stringstream bad("3 4 4 1 1\n");
    CHECK_THROWS_AS(read_field(bad), Error);
}
