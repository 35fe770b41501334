#include "sfv/fv_ops.hpp"

#include <cmath>

namespace sfv {

FluxMode flux_mode_from_string(const std::string& s) {
    if (s == "linear") return FluxMode::Linear;
    if (s == "corner") return FluxMode::Corner;
    throw std::invalid_argument("unknown flux mode: " + s);
}

std::string to_string(FluxMode mode) {
    return mode == FluxMode::Linear ? "linear" : "corner";
}

FaceFluxField::FaceFluxField(GridPtr grid)
    : grid_(std::move(grid)),
      xflux_(static_cast<std::size_t>(grid_->nx() + 1) * grid_->ny(), 0.0),
      yflux_(static_cast<std::size_t>(grid_->nx()) * (grid_->ny() + 1), 0.0) {}

double FaceFluxField::cell_divergence(int i, int j) const {
    return xflux(i + 1, j) - xflux(i, j) + yflux(i, j + 1) - yflux(i, j);
}

double FaceFluxField::max_abs() const {
    double m = 0.0;
    for (double v : xflux_) m = std::max(m, std::abs(v));
    for (double v : yflux_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

enum class BoundaryKind { Dirichlet, Neumann };

// Two-point-flux -Laplacian: row i gets (1/|Omega_i|) sum_f (w_P - w_Q)/|d| |A|.
// Dirichlet boundary faces use the half-cell centroid-to-face distance;
// Neumann boundary faces drop out (zero gradient).
SparseMatrix assemble_laplacian(GridPtr grid, BoundaryKind bc) {
    const auto& g = *grid;
    SparseMatrix L(g.num_cells());
    const double vol = g.cell_volume();
    const double cx = g.hy() / (g.hx() * vol);  // interior x-face: |A|/(|d| |Omega|)
    const double cy = g.hx() / (g.hy() * vol);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t row = g.index(i, j);
            // west / east
            if (i > 0) {
                L.add(row, row, cx);
                L.add(row, g.index(i - 1, j), -cx);
            } else if (bc == BoundaryKind::Dirichlet) {
                L.add(row, row, 2.0 * cx);
            }
            if (i < g.nx() - 1) {
                L.add(row, row, cx);
                L.add(row, g.index(i + 1, j), -cx);
            } else if (bc == BoundaryKind::Dirichlet) {
                L.add(row, row, 2.0 * cx);
            }
            // south / north
            if (j > 0) {
                L.add(row, row, cy);
                L.add(row, g.index(i, j - 1), -cy);
            } else if (bc == BoundaryKind::Dirichlet) {
                L.add(row, row, 2.0 * cy);
            }
            if (j < g.ny() - 1) {
                L.add(row, row, cy);
                L.add(row, g.index(i, j + 1), -cy);
            } else if (bc == BoundaryKind::Dirichlet) {
                L.add(row, row, 2.0 * cy);
            }
        }
    }
    L.finalize();
    return L;
}

void add_convection_entries(SparseMatrix& M, const FaceFluxField& flux, double weight) {
    const auto& g = flux.grid();
    const double inv_vol = weight / g.cell_volume();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 1; i < g.nx(); ++i) {
            double phi = flux.xflux(i, j);
            if (phi == 0.0) continue;
            std::size_t p = g.index(i - 1, j), q = g.index(i, j);
            double half = 0.5 * phi * inv_vol;
            M.add(p, p, half);
            M.add(p, q, half);
            M.add(q, p, -half);
            M.add(q, q, -half);
        }
    }
    for (int j = 1; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            double phi = flux.yflux(i, j);
            if (phi == 0.0) continue;
            std::size_t p = g.index(i, j - 1), q = g.index(i, j);
            double half = 0.5 * phi * inv_vol;
            M.add(p, p, half);
            M.add(p, q, half);
            M.add(q, p, -half);
            M.add(q, q, -half);
        }
    }
}

void add_laplacian_neumann_entries(SparseMatrix& M, const StructuredGrid& g, double weight) {
    const double vol = g.cell_volume();
    const double cx = weight * g.hy() / (g.hx() * vol);
    const double cy = weight * g.hx() / (g.hy() * vol);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            std::size_t row = g.index(i, j);
            if (i > 0) {
                M.add(row, row, cx);
                M.add(row, g.index(i - 1, j), -cx);
            }
            if (i < g.nx() - 1) {
                M.add(row, row, cx);
                M.add(row, g.index(i + 1, j), -cx);
            }
            if (j > 0) {
                M.add(row, row, cy);
                M.add(row, g.index(i, j - 1), -cy);
            }
            if (j < g.ny() - 1) {
                M.add(row, row, cy);
                M.add(row, g.index(i, j + 1), -cy);
            }
        }
    }
}

// d/dx along one grid line, second order one-sided at the ends.
double deriv_1d(const ScalarField& f, int i, int j, bool xdir) {
    const auto& g = f.grid();
    int n = xdir ? g.nx() : g.ny();
    double h = xdir ? g.hx() : g.hy();
    auto at = [&](int k) { return xdir ? f(k, j) : f(i, k); };
    int k = xdir ? i : j;
    if (k > 0 && k < n - 1) return (at(k + 1) - at(k - 1)) / (2.0 * h);
    if (k == 0) {
        if (n >= 3) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        return (at(1) - at(0)) / h;
    }
    if (n >= 3) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(n - 1) - at(n - 2)) / h;
}

}  // namespace

SparseMatrix assemble_laplacian_dirichlet(GridPtr grid) {
    return assemble_laplacian(std::move(grid), BoundaryKind::Dirichlet);
}

SparseMatrix assemble_laplacian_neumann(GridPtr grid) {
    return assemble_laplacian(std::move(grid), BoundaryKind::Neumann);
}

SparseMatrix assemble_convection(const FaceFluxField& flux) {
    SparseMatrix C(flux.grid().num_cells());
    add_convection_entries(C, flux, 1.0);
    C.finalize();
    return C;
}

SparseMatrix assemble_helmholtz_neumann(GridPtr grid, double dt, double Re,
                                        const FaceFluxField& flux) {
    if (dt <= 0.0 || Re <= 0.0)
        throw std::invalid_argument("assemble_helmholtz_neumann: dt and Re must be positive");
    if (!grid->same_as(flux.grid()))
        throw std::invalid_argument("assemble_helmholtz_neumann: grid mismatch");
    const auto& g = *grid;
    SparseMatrix H(g.num_cells());
    for (std::size_t k = 0; k < g.num_cells(); ++k) H.add(k, k, 1.0 / dt);
    add_convection_entries(H, flux, 1.0);
    add_laplacian_neumann_entries(H, g, 1.0 / Re);
    H.finalize();
    return H;
}

std::pair<ScalarField, ScalarField> curl_to_velocity(const ScalarField& psi) {
    GridPtr grid = psi.grid_ptr();
    ScalarField u(grid), v(grid);
    const auto& g = *grid;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            u(i, j) = deriv_1d(psi, i, j, /*xdir=*/false);
            v(i, j) = -deriv_1d(psi, i, j, /*xdir=*/true);
        }
    }
    return {std::move(u), std::move(v)};
}

FaceFluxField stream_to_flux(const ScalarField& psi, FluxMode mode) {
    GridPtr grid = psi.grid_ptr();
    const auto& g = *grid;
    FaceFluxField flux(grid);

    if (mode == FluxMode::Linear) {
        auto [u, v] = curl_to_velocity(psi);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 1; i < g.nx(); ++i)
                flux.xflux(i, j) = 0.5 * (u(i - 1, j) + u(i, j)) * g.hy();
        for (int j = 1; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                flux.yflux(i, j) = 0.5 * (v(i, j - 1) + v(i, j)) * g.hx();
        return flux;
    }

    // Corner mode: psi at cell corners, zero on the boundary (psi = 0 there).
    // Face flux is the difference of corner values along the face, so the
    // per-cell divergence telescopes to zero exactly.
    std::vector<double> corner(static_cast<std::size_t>(g.nx() + 1) * (g.ny() + 1), 0.0);
    auto cidx = [&](int i, int j) { return static_cast<std::size_t>(j) * (g.nx() + 1) + i; };
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i)
            corner[cidx(i, j)] =
                0.25 * (psi(i - 1, j - 1) + psi(i, j - 1) + psi(i - 1, j) + psi(i, j));
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i)
            flux.xflux(i, j) = corner[cidx(i, j + 1)] - corner[cidx(i, j)];
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            flux.yflux(i, j) = corner[cidx(i, j)] - corner[cidx(i + 1, j)];
    return flux;
}

}  // namespace sfv
