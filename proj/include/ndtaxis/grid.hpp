#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ndtaxis {

/// Axis-aligned interval (dim = 1) or rectangle (dim = 2) anchored at the origin.
struct Domain {
    int dim = 1;
    std::array<double, 2> lengths{1.0, 1.0};

    static Domain line(double length);
    static Domain rectangle(double lx, double ly);

    double volume() const;
    bool operator==(const Domain&) const = default;
};

/// Uniform cell-centered grid. Cells along x vary fastest in storage.
class Grid {
public:
    Grid() = default;
    Grid(Domain domain, std::array<int, 2> cells);

    static Grid line(double length, int n);
    static Grid rectangle(double lx, double ly, int nx, int ny);

    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.dim; }
    int n(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
    double h(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
    double length(int axis) const { return domain_.lengths[static_cast<std::size_t>(axis)]; }
    double min_spacing() const;
    std::size_t size() const;
    double cell_volume() const;

    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_[0]) + static_cast<std::size_t>(i);
    }
    double center(int axis, int i) const { return (i + 0.5) * h(axis); }

    /// Number of faces normal to `axis`, boundary faces included.
    std::size_t face_count(int axis) const;

    bool operator==(const Grid& other) const {
        return domain_ == other.domain_ && n_ == other.n_;
    }

private:
    Domain domain_{};
    std::array<int, 2> n_{2, 1};
    std::array<double, 2> h_{0.5, 1.0};
};

/// One real per cell. Value type; operations never mutate their inputs.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Grid grid, double value);
    ScalarField(Grid grid, std::vector<double> values);

    /// Samples f at cell centers; f receives (x, y), y = 0 in 1D.
    static ScalarField sample(const Grid& grid, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }

    double min() const;
    double max() const;
    bool all_finite() const;

private:
    Grid grid_{};
    std::vector<double> values_;
};

/// Face-normal values per axis. Face k along x sits on the left side of cell k
/// (the face past the last cell is the right boundary); same layout along y.
struct FaceField {
    Grid grid;
    std::array<std::vector<double>, 2> normal;

    std::size_t face_index(int axis, int i, int j) const;
};

double integrate(const ScalarField& f);

/// Difference quotients on interior faces; boundary faces are zero (no flux).
FaceField face_gradient(const ScalarField& f);

ScalarField divergence(const FaceField& flux);

ScalarField laplacian(const ScalarField& f);

/// p >= 1, or p = infinity for the max norm.
double lp_norm(const ScalarField& f, double p);

/// Cellwise |grad f|^2 built from the squared interior-face quotients
/// adjacent to each cell, averaged per axis and summed over axes.
ScalarField cell_gradient_squared(const ScalarField& f);

/// Integral of w_f * g_f^2 over all interior faces, with each cell's volume
/// shared evenly between its interior faces along every axis. `weight` maps
/// the two adjacent cell indices to the face weight.
double face_quadratic_integral(const FaceField& g,
                               const std::function<double(std::size_t, std::size_t)>& weight);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);

}  // namespace ndtaxis
