#include "ndtaxis/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ndtaxis/errors.hpp"

namespace ndtaxis {

Domain Domain::line(double length) { return Domain{1, {length, 1.0}}; }

Domain Domain::rectangle(double lx, double ly) { return Domain{2, {lx, ly}}; }

double Domain::volume() const { return dim == 1 ? lengths[0] : lengths[0] * lengths[1]; }

Grid::Grid(Domain domain, std::array<int, 2> cells) : domain_(domain), n_(cells) {
    if (domain_.dim != 1 && domain_.dim != 2) {
        throw InvalidArgument("domain dimension must be 1 or 2");
    }
    for (int a = 0; a < domain_.dim; ++a) {
        const auto k = static_cast<std::size_t>(a);
        if (!(domain_.lengths[k] > 0.0) || !std::isfinite(domain_.lengths[k])) {
            throw InvalidArgument("domain length along axis " + std::to_string(a) + " must be positive");
        }
        if (n_[k] < 2) {
            throw InvalidArgument("grid needs at least 2 cells along axis " + std::to_string(a));
        }
        h_[k] = domain_.lengths[k] / n_[k];
    }
    if (domain_.dim == 1) {
        domain_.lengths[1] = 1.0;
        n_[1] = 1;
        h_[1] = 1.0;
    }
}

Grid Grid::line(double length, int n) { return Grid(Domain::line(length), {n, 1}); }

Grid Grid::rectangle(double lx, double ly, int nx, int ny) {
    return Grid(Domain::rectangle(lx, ly), {nx, ny});
}

double Grid::min_spacing() const { return dim() == 1 ? h_[0] : std::min(h_[0], h_[1]); }

std::size_t Grid::size() const {
    return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]);
}

double Grid::cell_volume() const { return dim() == 1 ? h_[0] : h_[0] * h_[1]; }

std::size_t Grid::face_count(int axis) const {
    if (axis == 0) return static_cast<std::size_t>(n_[0] + 1) * static_cast<std::size_t>(n_[1]);
    return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1] + 1);
}

ScalarField::ScalarField(Grid grid, double value)
    : grid_(std::move(grid)), values_(grid_.size(), value) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("field has " + std::to_string(values_.size()) + " values, grid has " +
                              std::to_string(grid_.size()) + " cells");
    }
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(double, double)>& f) {
    std::vector<double> values(grid.size());
    for (int j = 0; j < grid.n(1); ++j) {
        const double y = grid.dim() == 2 ? grid.center(1, j) : 0.0;
        for (int i = 0; i < grid.n(0); ++i) {
            values[grid.index(i, j)] = f(grid.center(0, i), y);
        }
    }
    return ScalarField(grid, std::move(values));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

std::size_t FaceField::face_index(int axis, int i, int j) const {
    if (axis == 0) return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.n(0) + 1) + static_cast<std::size_t>(i);
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.n(0)) + static_cast<std::size_t>(i);
}

double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double x : f.values()) sum += x;
    return sum * f.grid().cell_volume();
}

FaceField face_gradient(const ScalarField& f) {
    const Grid& g = f.grid();
    FaceField out{g, {}};
    const int nx = g.n(0);
    const int ny = g.n(1);
    out.normal[0].assign(g.face_count(0), 0.0);
    const double hx = g.h(0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            out.normal[0][out.face_index(0, i, j)] = (f.at(i, j) - f.at(i - 1, j)) / hx;
        }
    }
    if (g.dim() == 2) {
        out.normal[1].assign(g.face_count(1), 0.0);
        const double hy = g.h(1);
        for (int j = 1; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                out.normal[1][out.face_index(1, i, j)] = (f.at(i, j) - f.at(i, j - 1)) / hy;
            }
        }
    }
    return out;
}

ScalarField divergence(const FaceField& flux) {
    const Grid& g = flux.grid;
    std::vector<double> out(g.size(), 0.0);
    const int nx = g.n(0);
    const int ny = g.n(1);
    const double hx = g.h(0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            out[g.index(i, j)] =
                (flux.normal[0][flux.face_index(0, i + 1, j)] - flux.normal[0][flux.face_index(0, i, j)]) / hx;
        }
    }
    if (g.dim() == 2) {
        const double hy = g.h(1);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                out[g.index(i, j)] +=
                    (flux.normal[1][flux.face_index(1, i, j + 1)] - flux.normal[1][flux.face_index(1, i, j)]) / hy;
            }
        }
    }
    return ScalarField(g, std::move(out));
}

ScalarField laplacian(const ScalarField& f) { return divergence(face_gradient(f)); }

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p) && p > 0) {
        double m = 0.0;
        for (double x : f.values()) m = std::max(m, std::abs(x));
        return m;
    }
    if (!(p >= 1.0)) {
        throw InvalidArgument("invalid exponent p = " + std::to_string(p) + " (need p >= 1)");
    }
    double sum = 0.0;
    for (double x : f.values()) sum += std::pow(std::abs(x), p);
    return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

ScalarField cell_gradient_squared(const ScalarField& f) {
    const Grid& g = f.grid();
    std::vector<double> out(g.size(), 0.0);
    for (int axis = 0; axis < g.dim(); ++axis) {
        const int n_axis = g.n(axis);
        const double h = g.h(axis);
        for (int j = 0; j < g.n(1); ++j) {
            for (int i = 0; i < g.n(0); ++i) {
                const int pos = axis == 0 ? i : j;
                double sum = 0.0;
                int count = 0;
                if (pos > 0) {
                    const double d = (f.at(i, j) - (axis == 0 ? f.at(i - 1, j) : f.at(i, j - 1))) / h;
                    sum += d * d;
                    ++count;
                }
                if (pos < n_axis - 1) {
                    const double d = ((axis == 0 ? f.at(i + 1, j) : f.at(i, j + 1)) - f.at(i, j)) / h;
                    sum += d * d;
                    ++count;
                }
                out[g.index(i, j)] += sum / count;
            }
        }
    }
    return ScalarField(g, std::move(out));
}

double face_quadratic_integral(const FaceField& grad,
                               const std::function<double(std::size_t, std::size_t)>& weight) {
    const Grid& g = grad.grid;
    const double vol = g.cell_volume();
    double total = 0.0;
    for (int axis = 0; axis < g.dim(); ++axis) {
        const int n_axis = g.n(axis);
        // Interior faces per cell along this axis: 1 at the ends, 2 elsewhere.
        auto share = [n_axis](int pos) { return (pos == 0 || pos == n_axis - 1) ? 1.0 : 0.5; };
        for (int j = 0; j < g.n(1); ++j) {
            for (int i = 0; i < g.n(0); ++i) {
                const int pos = axis == 0 ? i : j;
                if (pos == 0) continue;
                const std::size_t right = g.index(i, j);
                const std::size_t left = axis == 0 ? g.index(i - 1, j) : g.index(i, j - 1);
                const double d = grad.normal[static_cast<std::size_t>(axis)][grad.face_index(axis, i, j)];
                const double face_volume = vol * (share(pos - 1) + share(pos));
                total += weight(left, right) * d * d * face_volume;
            }
        }
    }
    return total;
}

namespace {
template <typename Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
    if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = op(a[k], b[k]);
    return ScalarField(a.grid(), std::move(out));
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}

ScalarField operator*(double s, const ScalarField& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& x : out) x *= s;
    return ScalarField(a.grid(), std::move(out));
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}

}  // namespace ndtaxis
