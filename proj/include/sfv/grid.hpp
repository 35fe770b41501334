#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfv {

// Uniform Cartesian grid of nx*ny cells on [0,lx]x[0,ly].
// Cell (i,j) has centroid ((i+0.5)hx, (j+0.5)hy) and linear index j*nx + i
// (row-major, j outer). All fields in the project use this ordering.
class StructuredGrid {
public:
    StructuredGrid(int nx, int ny, double lx, double ly)
        : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
        if (nx < 2 || ny < 2)
            throw std::invalid_argument("StructuredGrid: need nx >= 2 and ny >= 2");
        if (lx <= 0.0 || ly <= 0.0)
            throw std::invalid_argument("StructuredGrid: domain extents must be positive");
        hx_ = lx / nx;
        hy_ = ly / ny;
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double cell_volume() const { return hx_ * hy_; }
    std::size_t num_cells() const { return static_cast<std::size_t>(nx_) * ny_; }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx_ + i;
    }
    double xc(int i) const { return (i + 0.5) * hx_; }
    double yc(int j) const { return (j + 0.5) * hy_; }

    bool same_as(const StructuredGrid& other) const {
        return nx_ == other.nx_ && ny_ == other.ny_ &&
               lx_ == other.lx_ && ly_ == other.ly_;
    }

private:
    int nx_, ny_;
    double lx_, ly_;
    double hx_, hy_;
};

using GridPtr = std::shared_ptr<const StructuredGrid>;

enum class FieldTag : int { Generic = 0, Vorticity = 1, StreamFunction = 2, ForcingShape = 3 };

std::string to_string(FieldTag tag);
FieldTag field_tag_from_int(int v);

// Cell-centered scalar values on a StructuredGrid.
class ScalarField {
public:
    ScalarField(GridPtr grid, FieldTag tag = FieldTag::Generic);
    ScalarField(GridPtr grid, std::vector<double> values, FieldTag tag = FieldTag::Generic);

    const StructuredGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    FieldTag tag() const { return tag_; }
    void set_tag(FieldTag tag) { tag_ = tag; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double operator()(int i, int j) const { return values_[grid_->index(i, j)]; }
    double& operator()(int i, int j) { return values_[grid_->index(i, j)]; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    std::size_t size() const { return values_.size(); }

    bool all_finite() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
    FieldTag tag_;
};

// Discrete L2(Omega) pairing: sum_i a_i b_i |Omega_i|.
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& a);

// Evaluate f at cell centroids.
ScalarField sample_function(GridPtr grid, const std::function<double(double, double)>& f,
                            FieldTag tag = FieldTag::Generic);

}  // namespace sfv
