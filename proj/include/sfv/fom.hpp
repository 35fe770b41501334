#pragma once

#include "sfv/fv_ops.hpp"
#include "sfv/pod.hpp"

#include <cmath>

namespace sfv {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FomConfig {
    int nx = 64;
    int ny = 64;
    double lx = 2.0 * M_PI;
    double ly = 2.0 * M_PI;
    double Re = 800.0;
    double dt = 0.01;
    double t0 = 0.0;
    double T = 10.0;
    double gamma = 0.0;  // forcing strength, 0 disables the source term
    FluxMode flux_mode = FluxMode::Linear;
    double solver_tol = 1e-10;
    int solver_maxit = -1;  // -1: 10 * n
    int snapshot_stride = 8;

    void validate() const;
    GridPtr make_grid() const;
    int num_steps() const;
};

struct FomState {
    int step = 0;
    double time = 0.0;
    ScalarField omega;
    ScalarField psi;
};

struct FomDiagnostics {
    std::vector<double> times;
    std::vector<double> enstrophy;
    std::vector<double> total_vorticity;
    double wall_seconds = 0.0;
};

struct FomResult {
    SnapshotSet omega_snapshots;
    SnapshotSet psi_snapshots;
    FomDiagnostics diagnostics;
};

// Vortex-merger initial vorticity: two Gaussian vortices at (3pi/4, pi) and
// (5pi/4, pi). Requires the 2pi x 2pi domain.
ScalarField vortex_merger_ic(GridPtr grid);

// Separable forcing F = F2(t) F1(x, y) with F1 = cos(3x) cos(3y) and
// F2(t) = -gamma exp(-t/Re).
ScalarField forcing_field_F1(GridPtr grid);
double forcing_amplitude_F2(double t, double Re, double gamma);

// e = integral of omega^2 over the domain.
double enstrophy(const ScalarField& omega);
double total_vorticity(const ScalarField& omega);

class FomSolver {
public:
    explicit FomSolver(FomConfig cfg);

    const FomConfig& config() const { return cfg_; }
    GridPtr grid() const { return grid_; }

    // Initial state: omega0 sampled (or supplied), psi0 from one Poisson solve.
    FomState initial_state(const ScalarField* omega0 = nullptr) const;

    // One segregated BDF1 step: implicit transport solve for omega, then the
    // Poisson solve for psi.
    FomState step(const FomState& state) const;

    FomResult run(const ScalarField* omega0 = nullptr) const;

    ScalarField solve_poisson(const ScalarField& omega, const DenseVector* guess = nullptr) const;

private:
    FomConfig cfg_;
    GridPtr grid_;
    SparseMatrix poisson_;
    ScalarField forcing_shape_;
};

}  // namespace sfv
