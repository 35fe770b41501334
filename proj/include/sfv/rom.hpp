#pragma once

#include "sfv/fom.hpp"
#include "sfv/pod.hpp"

namespace sfv {

// Grid/config identity carried by persisted artifacts so stale files are
// rejected instead of silently misused.
struct Fingerprint {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    std::size_t n_omega = 0, n_psi = 0;

    bool operator==(const Fingerprint&) const = default;
};

// Dense Galerkin projections of the FV operators onto the two POD bases.
// mass:        (phi_i, phi_j), identity up to roundoff
// cross_mass:  (xi_i, phi_j)
// diffusion:   (phi_i, Lap phi_j) with the Neumann operator
// psi_poisson: (xi_i, Lap xi_j) with the Dirichlet operator
// convection:  (phi_i, div((curl xi_j) phi_k)), rank-3, index order (i, j, k)
// forcing:     (phi_i, F1)
struct ReducedOperators {
    DenseMatrix mass;
    DenseMatrix cross_mass;
    DenseMatrix diffusion;
    DenseMatrix psi_poisson;
    std::vector<DenseMatrix> convection;  // convection[j](i, k)
    DenseVector forcing;
    Fingerprint fingerprint;

    std::size_t n_omega() const { return mass.rows(); }
    std::size_t n_psi() const { return psi_poisson.rows(); }
};

struct ReducedState {
    int step = 0;
    DenseVector beta;   // vorticity coefficients
    DenseVector gamma;  // stream function coefficients
};

ReducedOperators project_operators(const PodBasis& basis_omega, const PodBasis& basis_psi,
                                   FluxMode flux_mode = FluxMode::Linear);

// One implicit step of the reduced system:
//   (M/dt + C(gamma^n) - A/Re) beta^{n+1} = forcing * F2^{n+1} + M beta^n / dt
//   B gamma^{n+1} = -Mt beta^{n+1}
ReducedState rom_step(const ReducedState& state, const ReducedOperators& ops, double dt, double Re,
                      double f2_next);

struct RomResult {
    std::vector<double> times;              // recorded (snapshot) times
    std::vector<DenseVector> beta_history;  // at recorded times
    std::vector<DenseVector> gamma_history;
    double online_seconds = 0.0;  // coefficient march only, no reconstruction
};

// March the reduced system from the projected initial condition, recording
// coefficients every cfg.snapshot_stride steps (same clock as the FOM).
RomResult rom_run(const ReducedOperators& ops, const PodBasis& basis_omega,
                  const ScalarField& omega0, const FomConfig& cfg);

}  // namespace sfv
