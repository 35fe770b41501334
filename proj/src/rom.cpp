#include "sfv/rom.hpp"

#include <chrono>

namespace sfv {

namespace {

DenseMatrix gram(const std::vector<ScalarField>& rows, const std::vector<ScalarField>& cols) {
    DenseMatrix m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = l2_inner(rows[i], cols[j]);
    return m;
}

DenseMatrix project_pairing(const std::vector<ScalarField>& test, const SparseMatrix& op,
                            const std::vector<ScalarField>& trial, GridPtr grid, double sign) {
    DenseMatrix m(test.size(), trial.size());
    for (std::size_t j = 0; j < trial.size(); ++j) {
        ScalarField applied(grid, op.multiply(trial[j].values()));
        for (std::size_t i = 0; i < test.size(); ++i)
            m(i, j) = sign * l2_inner(test[i], applied);
    }
    return m;
}

}  // namespace

ReducedOperators project_operators(const PodBasis& basis_omega, const PodBasis& basis_psi,
                                   FluxMode flux_mode) {
    if (basis_omega.modes.empty() || basis_psi.modes.empty())
        throw std::invalid_argument("project_operators: empty basis");
    GridPtr grid = basis_omega.modes.front().grid_ptr();
    if (!grid->same_as(basis_psi.modes.front().grid()))
        throw std::invalid_argument("project_operators: bases live on different grids");

    const auto& phi = basis_omega.modes;
    const auto& xi = basis_psi.modes;

    // The discrete FV operators give -Lap; the projections below store
    // (., Lap .), hence the sign flip.
    SparseMatrix lap_neumann = assemble_laplacian_neumann(grid);
    SparseMatrix lap_dirichlet = assemble_laplacian_dirichlet(grid);

    ReducedOperators ops;
    ops.mass = gram(phi, phi);
    ops.cross_mass = gram(xi, phi);
    ops.diffusion = project_pairing(phi, lap_neumann, phi, grid, -1.0);
    ops.psi_poisson = project_pairing(xi, lap_dirichlet, xi, grid, -1.0);

    ops.convection.reserve(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) {
        FaceFluxField flux = stream_to_flux(xi[j], flux_mode);
        SparseMatrix conv = assemble_convection(flux);
        ops.convection.push_back(project_pairing(phi, conv, phi, grid, 1.0));
    }

    ScalarField f1 = forcing_field_F1(grid);
    ops.forcing.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) ops.forcing[i] = l2_inner(phi[i], f1);

    ops.fingerprint = {grid->nx(), grid->ny(), grid->lx(), grid->ly(), phi.size(), xi.size()};
    return ops;
}

ReducedState rom_step(const ReducedState& state, const ReducedOperators& ops, double dt, double Re,
                      double f2_next) {
    if (dt <= 0.0 || Re <= 0.0) throw std::invalid_argument("rom_step: dt and Re must be positive");
    const std::size_t nw = ops.n_omega();
    const std::size_t np = ops.n_psi();
    if (state.beta.size() != nw || state.gamma.size() != np)
        throw std::invalid_argument("rom_step: state size mismatch");

    DenseMatrix lhs(nw, nw);
    for (std::size_t i = 0; i < nw; ++i)
        for (std::size_t k = 0; k < nw; ++k) {
            double c = 0.0;
            for (std::size_t j = 0; j < np; ++j) c += state.gamma[j] * ops.convection[j](i, k);
            lhs(i, k) = ops.mass(i, k) / dt + c - ops.diffusion(i, k) / Re;
        }

    DenseVector rhs = ops.mass.multiply(state.beta);
    for (std::size_t i = 0; i < nw; ++i) rhs[i] = rhs[i] / dt + ops.forcing[i] * f2_next;

    ReducedState next;
    next.step = state.step + 1;
    try {
        next.beta = lu_solve(lhs, rhs);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("rom_step: singular reduced system at step " +
                                  std::to_string(next.step));
    }

    DenseVector g_rhs = ops.cross_mass.multiply(next.beta);
    for (double& v : g_rhs) v = -v;
    next.gamma = lu_solve(ops.psi_poisson, g_rhs);
    return next;
}

RomResult rom_run(const ReducedOperators& ops, const PodBasis& basis_omega,
                  const ScalarField& omega0, const FomConfig& cfg) {
    cfg.validate();
    if (basis_omega.retained() != ops.n_omega())
        throw std::invalid_argument("rom_run: basis/operator size mismatch");

    RomResult out;
    DenseVector beta0 = project(omega0, basis_omega);

    const auto wall_start = std::chrono::steady_clock::now();
    ReducedState state;
    state.beta = std::move(beta0);
    DenseVector g_rhs = ops.cross_mass.multiply(state.beta);
    for (double& v : g_rhs) v = -v;
    state.gamma = lu_solve(ops.psi_poisson, g_rhs);

    const int n_steps = cfg.num_steps();
    for (int n = 0; n < n_steps; ++n) {
        const double t_next = cfg.t0 + (state.step + 1) * cfg.dt;
        const double f2 = forcing_amplitude_F2(t_next, cfg.Re, cfg.gamma);
        state = rom_step(state, ops, cfg.dt, cfg.Re, f2);
        if (state.step % cfg.snapshot_stride == 0) {
            out.times.push_back(t_next);
            out.beta_history.push_back(state.beta);
            out.gamma_history.push_back(state.gamma);
        }
    }
    out.online_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return out;
}

}  // namespace sfv
