#pragma once

#include "sfv/grid.hpp"
#include "sfv/linalg.hpp"

namespace sfv {

enum class FluxMode { Linear, Corner };

FluxMode flux_mode_from_string(const std::string& s);
std::string to_string(FluxMode mode);

// Signed volumetric fluxes through cell faces, positive in +x/+y.
// x-faces: (nx+1) * ny entries, face (i,j) sits between cells (i-1,j) and (i,j).
// y-faces: nx * (ny+1) entries, face (i,j) sits between cells (i,j-1) and (i,j).
// Boundary faces carry exactly zero flux (slip condition u.n = 0).
class FaceFluxField {
public:
    explicit FaceFluxField(GridPtr grid);

    const StructuredGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }

    double xflux(int i, int j) const { return xflux_[static_cast<std::size_t>(j) * (grid_->nx() + 1) + i]; }
    double& xflux(int i, int j) { return xflux_[static_cast<std::size_t>(j) * (grid_->nx() + 1) + i]; }
    double yflux(int i, int j) const { return yflux_[static_cast<std::size_t>(j) * grid_->nx() + i]; }
    double& yflux(int i, int j) { return yflux_[static_cast<std::size_t>(j) * grid_->nx() + i]; }

    // Net outflux of cell (i,j): sum of signed face fluxes with outward orientation.
    double cell_divergence(int i, int j) const;
    double max_abs() const;

private:
    GridPtr grid_;
    std::vector<double> xflux_;
    std::vector<double> yflux_;
};

// Discrete -Laplacian with homogeneous Dirichlet faces (half-cell distance
// from centroid to boundary). SPD; used for the stream function Poisson solve.
SparseMatrix assemble_laplacian_dirichlet(GridPtr grid);

// Discrete -Laplacian with zero-gradient (Neumann) boundary faces.
// Singular with constant nullspace; used for the vorticity diffusion term.
SparseMatrix assemble_laplacian_neumann(GridPtr grid);

// Convection operator for a given face flux field with central-differencing
// face interpolation: (C w)_i = (1/|Omega_i|) sum_f s_f phi_f (w_P + w_Q)/2.
SparseMatrix assemble_convection(const FaceFluxField& flux);

// Implicit BDF1 vorticity operator: H = I/dt + C(flux) + (1/Re) L_N.
SparseMatrix assemble_helmholtz_neumann(GridPtr grid, double dt, double Re,
                                        const FaceFluxField& flux);

// Face fluxes of the velocity u = curl(psi).
// Linear mode: cell-centered central-difference velocities interpolated to faces.
// Corner mode: psi averaged to corners, flux = corner difference along the face
// (exactly divergence-free).
FaceFluxField stream_to_flux(const ScalarField& psi, FluxMode mode = FluxMode::Linear);

// Cell-centered velocities (u, v) = (d psi/dy, -d psi/dx) by central
// differences, one-sided second order at boundary cells. Diagnostics only.
std::pair<ScalarField, ScalarField> curl_to_velocity(const ScalarField& psi);

}  // namespace sfv
