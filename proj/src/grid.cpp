#include "sfv/grid.hpp"

#include <cmath>

namespace sfv {

std::string to_string(FieldTag tag) {
    switch (tag) {
        case FieldTag::Vorticity: return "omega";
        case FieldTag::StreamFunction: return "psi";
        case FieldTag::ForcingShape: return "forcing";
        default: return "generic";
    }
}

FieldTag field_tag_from_int(int v) {
    switch (v) {
        case 1: return FieldTag::Vorticity;
        case 2: return FieldTag::StreamFunction;
        case 3: return FieldTag::ForcingShape;
        default: return FieldTag::Generic;
    }
}

ScalarField::ScalarField(GridPtr grid, FieldTag tag)
    : grid_(std::move(grid)), values_(grid_->num_cells(), 0.0), tag_(tag) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values, FieldTag tag)
    : grid_(std::move(grid)), values_(std::move(values)), tag_(tag) {
    if (values_.size() != grid_->num_cells())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
    if (!a.grid().same_as(b.grid()))
        throw std::invalid_argument("l2_inner: fields live on different grids");
    double s = 0.0;
    const auto& av = a.values();
    const auto& bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return s * a.grid().cell_volume();
}

double l2_norm(const ScalarField& a) {
    return std::sqrt(l2_inner(a, a));
}

ScalarField sample_function(GridPtr grid, const std::function<double(double, double)>& f,
                            FieldTag tag) {
    ScalarField out(grid, tag);
    const auto& g = *grid;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            out(i, j) = f(g.xc(i), g.yc(j));
    return out;
}

}  // namespace sfv
