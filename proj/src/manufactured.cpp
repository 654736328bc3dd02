#include "ndtaxis/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "ndtaxis/random.hpp"

namespace ndtaxis {

namespace {

constexpr double kPi = std::numbers::pi;

// Forward-mode dual number; nests to give second derivatives.
template <class T>
struct Dual {
    T v{};
    T d{};
};

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T>
Dual<T> operator*(double s, const Dual<T>& a) { return {s * a.v, s * a.d}; }
template <class T>
Dual<T> operator+(double s, const Dual<T>& a) { return {s + a.v, a.d}; }

inline double dcos(double x) { return std::cos(x); }
inline double dsin(double x) { return std::sin(x); }
inline double dexp(double x) { return std::exp(x); }
inline double dpow(double x, double e) { return std::pow(x, e); }

template <class T>
Dual<T> dsin(const Dual<T>& a);
template <class T>
Dual<T> dcos(const Dual<T>& a) { return {dcos(a.v), -1.0 * dsin(a.v) * a.d}; }
template <class T>
Dual<T> dsin(const Dual<T>& a) { return {dsin(a.v), dcos(a.v) * a.d}; }
template <class T>
Dual<T> dexp(const Dual<T>& a) { return {dexp(a.v), dexp(a.v) * a.d}; }
template <class T>
Dual<T> dpow(const Dual<T>& a, double e) { return {dpow(a.v, e), e * dpow(a.v, e - 1.0) * a.d}; }

template <class T>
T shape(const T& x, const T& y, double lx, double ly, int dim) {
    T c = dcos((kPi / lx) * x);
    if (dim == 2) c = c * dcos((kPi / ly) * y);
    return c;
}

template <class T>
T u_star(const T& x, const T& y, const T& t, double lx, double ly, int dim) {
    return 2.0 + shape(x, y, lx, ly, dim) * dexp(-1.0 * t);
}

template <class T>
T v_star(const T& x, const T& y, const T& t, double lx, double ly, int dim) {
    return 2.0 + 0.5 * (shape(x, y, lx, ly, dim) * dexp(-1.0 * t));
}

}  // namespace

Manufactured::Manufactured(const Domain& domain, const ModelParams& params) : domain_(domain), params_(params) {
    params_.validate();
}

double Manufactured::u(double x, double y, double t) const {
    return u_star(x, y, t, domain_.lengths[0], domain_.lengths[1], domain_.dim);
}

double Manufactured::v(double x, double y, double t) const {
    return v_star(x, y, t, domain_.lengths[0], domain_.lengths[1], domain_.dim);
}

namespace {

struct ShapeTerms {
    double c, grad2, lap_c;  // C, |grad C|^2, lap C
};

ShapeTerms shape_terms(const Domain& d, double x, double y) {
    const double kx = kPi / d.lengths[0];
    const double ky = kPi / d.lengths[1];
    if (d.dim == 1) {
        const double c = std::cos(kx * x);
        const double s = std::sin(kx * x);
        return {c, kx * kx * s * s, -kx * kx * c};
    }
    const double cx = std::cos(kx * x), sx = std::sin(kx * x);
    const double cy = std::cos(ky * y), sy = std::sin(ky * y);
    const double c = cx * cy;
    return {c, kx * kx * sx * sx * cy * cy + ky * ky * cx * cx * sy * sy, -(kx * kx + ky * ky) * c};
}

void sources_from(const ShapeTerms& st, double a, double l, const PowerEvaluator& pow_l1, double& fu, double& fv) {
    const double uu = 2.0 + a * st.c;
    const double vv = 2.0 + 0.5 * a * st.c;
    const double ul1 = pow_l1(uu);
    const double ul2 = ul1 / uu;
    const double ul = ul1 * uu;
    const double diffusion = ul1 * vv * a * st.lap_c + ((l - 1.0) * ul2 * vv * a + ul1 * 0.5 * a) * a * st.grad2;
    const double taxis = ul * vv * 0.5 * a * st.lap_c + (l * ul1 * vv * a + ul * 0.5 * a) * 0.5 * a * st.grad2;
    fu = -a * st.c - diffusion + taxis - uu * vv;
    fv = -0.5 * a * st.c - 0.5 * a * st.lap_c + uu * vv;
}

}  // namespace

void Manufactured::sources(double x, double y, double t, double& fu, double& fv) const {
    sources_from(shape_terms(domain_, x, y), std::exp(-t), params_.l, PowerEvaluator(params_.l - 1.0), fu, fv);
}

ScalarField Manufactured::u_field(const Grid& grid, double t) const {
    return ScalarField::sample(grid, [&](double x, double y) { return u(x, y, t); });
}

ScalarField Manufactured::v_field(const Grid& grid, double t) const {
    return ScalarField::sample(grid, [&](double x, double y) { return v(x, y, t); });
}

State Manufactured::exact_state(const Grid& grid, double t) const {
    return State{u_field(grid, t), v_field(grid, t), t, 0.0};
}

Forcing Manufactured::forcing(const Grid& grid) const {
    std::vector<ShapeTerms> terms(grid.size());
    for (int j = 0; j < grid.n(1); ++j) {
        for (int i = 0; i < grid.n(0); ++i) {
            terms[grid.index(i, j)] = shape_terms(domain_, grid.center(0, i), grid.dim() == 2 ? grid.center(1, j) : 0.0);
        }
    }
    return [terms = std::move(terms), l = params_.l, pow_l1 = PowerEvaluator(params_.l - 1.0)](
               double t, std::span<double> fu, std::span<double> fv) {
        const double a = std::exp(-t);
        for (std::size_t k = 0; k < terms.size(); ++k) {
            double su, sv;
            sources_from(terms[k], a, l, pow_l1, su, sv);
            fu[k] += su;
            fv[k] += sv;
        }
    };
}

double manufactured_residual(const Manufactured& m, int points, std::uint64_t seed) {
    using D1 = Dual<double>;
    using D2 = Dual<D1>;
    const int dim = m.domain().dim;
    const double lx = m.domain().lengths[0];
    const double ly = m.domain().lengths[1];
    const double l = m.params().l;
    SplitMixStream rng(seed);
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const double x = rng.uniform(0.0, lx);
        const double y = dim == 2 ? rng.uniform(0.0, ly) : 0.0;
        const double t = rng.uniform(0.0, 1.0);

        // time derivatives
        const D1 tu = u_star(D1{x, 0.0}, D1{y, 0.0}, D1{t, 1.0}, lx, ly, dim);
        const D1 tv = v_star(D1{x, 0.0}, D1{y, 0.0}, D1{t, 1.0}, lx, ly, dim);

        // div(u^{l-1} v grad u - u^l v grad v) and lap v, one axis at a time
        double div_flux = 0.0;
        double lap_v = 0.0;
        for (int axis = 0; axis < dim; ++axis) {
            const D2 X = axis == 0 ? D2{D1{x, 1.0}, D1{1.0, 0.0}} : D2{D1{x, 0.0}, D1{0.0, 0.0}};
            const D2 Y = axis == 1 ? D2{D1{y, 1.0}, D1{1.0, 0.0}} : D2{D1{y, 0.0}, D1{0.0, 0.0}};
            const D2 T{D1{t, 0.0}, D1{0.0, 0.0}};
            const D2 U = u_star(X, Y, T, lx, ly, dim);
            const D2 V = v_star(X, Y, T, lx, ly, dim);
            // U.v = (u, u_axis) as a function of the coordinate; U.d = (u_axis, u_axis_axis)
            const D1 flux = dpow(U.v, l - 1.0) * V.v * U.d - dpow(U.v, l) * V.v * V.d;
            div_flux += flux.d;
            lap_v += V.d.d;
        }
        const double uu = tu.v;
        const double vv = tv.v;
        double fu, fv;
        m.sources(x, y, t, fu, fv);
        const double ru = tu.d - (div_flux + uu * vv) - fu;
        const double rv = tv.d - (lap_v - uu * vv) - fv;
        worst = std::max({worst, std::abs(ru), std::abs(rv)});
    }
    return worst;
}

}  // namespace ndtaxis
