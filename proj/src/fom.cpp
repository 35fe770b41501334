#include "sfv/fom.hpp"

#include <chrono>
#include <cmath>

namespace sfv {

void FomConfig::validate() const {
    if (Re <= 0.0) throw ConfigError("FomConfig: Re must be positive");
    if (dt <= 0.0) throw ConfigError("FomConfig: dt must be positive");
    if (T < t0) throw ConfigError("FomConfig: T must not precede t0");
    if (snapshot_stride < 1) throw ConfigError("FomConfig: snapshot stride must be >= 1");
    if (solver_tol <= 0.0) throw ConfigError("FomConfig: solver tolerance must be positive");
    if (nx < 2 || ny < 2) throw ConfigError("FomConfig: grid must be at least 2x2");
}

GridPtr FomConfig::make_grid() const {
    return std::make_shared<StructuredGrid>(nx, ny, lx, ly);
}

int FomConfig::num_steps() const {
    return static_cast<int>(std::llround((T - t0) / dt));
}

namespace {
bool is_two_pi_square(const StructuredGrid& g) {
    const double two_pi = 2.0 * M_PI;
    return std::abs(g.lx() - two_pi) < 1e-12 && std::abs(g.ly() - two_pi) < 1e-12;
}
}  // namespace

ScalarField vortex_merger_ic(GridPtr grid) {
    if (!is_two_pi_square(*grid))
        throw ConfigError("vortex_merger_ic: domain must be 2pi x 2pi");
    const double x1 = 3.0 * M_PI / 4.0, y1 = M_PI;
    const double x2 = 5.0 * M_PI / 4.0, y2 = M_PI;
    return sample_function(
        std::move(grid),
        [=](double x, double y) {
            double r1 = (x - x1) * (x - x1) + (y - y1) * (y - y1);
            double r2 = (x - x2) * (x - x2) + (y - y2) * (y - y2);
            return std::exp(-M_PI * r1) + std::exp(-M_PI * r2);
        },
        FieldTag::Vorticity);
}

ScalarField forcing_field_F1(GridPtr grid) {
    return sample_function(
        std::move(grid), [](double x, double y) { return std::cos(3.0 * x) * std::cos(3.0 * y); },
        FieldTag::ForcingShape);
}

double forcing_amplitude_F2(double t, double Re, double gamma) {
    if (gamma == 0.0) return 0.0;
    return -gamma * std::exp(-t / Re);
}

double enstrophy(const ScalarField& omega) {
    return l2_inner(omega, omega);
}

double total_vorticity(const ScalarField& omega) {
    double s = 0.0;
    for (double v : omega.values()) s += v;
    return s * omega.grid().cell_volume();
}

FomSolver::FomSolver(FomConfig cfg)
    : cfg_(std::move(cfg)),
      grid_((cfg_.validate(), cfg_.make_grid())),
      poisson_(assemble_laplacian_dirichlet(grid_)),
      forcing_shape_(forcing_field_F1(grid_)) {}

ScalarField FomSolver::solve_poisson(const ScalarField& omega, const DenseVector* guess) const {
    auto result = cg_solve(poisson_, omega.values(), cfg_.solver_tol, cfg_.solver_maxit, guess);
    return ScalarField(grid_, std::move(result.x), FieldTag::StreamFunction);
}

FomState FomSolver::initial_state(const ScalarField* omega0) const {
    ScalarField omega = omega0 ? *omega0 : vortex_merger_ic(grid_);
    if (!omega.grid().same_as(*grid_))
        throw ConfigError("FomSolver: initial condition grid mismatch");
    ScalarField psi = solve_poisson(omega);
    return {0, cfg_.t0, std::move(omega), std::move(psi)};
}

FomState FomSolver::step(const FomState& state) const {
    const double t_next = cfg_.t0 + (state.step + 1) * cfg_.dt;
    FaceFluxField flux = stream_to_flux(state.psi, cfg_.flux_mode);
    SparseMatrix H = assemble_helmholtz_neumann(grid_, cfg_.dt, cfg_.Re, flux);

    DenseVector rhs(grid_->num_cells());
    const double f2 = forcing_amplitude_F2(t_next, cfg_.Re, cfg_.gamma);
    const auto& w = state.omega.values();
    const auto& f1 = forcing_shape_.values();
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = f2 * f1[k] + w[k] / cfg_.dt;

    DenseVector omega_next;
    try {
        omega_next =
            bicgstab_solve(H, rhs, cfg_.solver_tol, cfg_.solver_maxit, &state.omega.values()).x;
    } catch (const IterativeFailure& e) {
        throw IterativeFailure("fom_step transport solve at step " +
                                   std::to_string(state.step + 1) + ": " + e.what(),
                               e.final_residual, e.iterations);
    }
    ScalarField omega(grid_, std::move(omega_next), FieldTag::Vorticity);

    ScalarField psi(grid_);
    try {
        psi = solve_poisson(omega, &state.psi.values());
    } catch (const IterativeFailure& e) {
        throw IterativeFailure("fom_step poisson solve at step " +
                                   std::to_string(state.step + 1) + ": " + e.what(),
                               e.final_residual, e.iterations);
    }
    return {state.step + 1, t_next, std::move(omega), std::move(psi)};
}

FomResult FomSolver::run(const ScalarField* omega0) const {
    const auto wall_start = std::chrono::steady_clock::now();
    FomResult out;
    out.omega_snapshots = SnapshotSet(FieldTag::Vorticity);
    out.psi_snapshots = SnapshotSet(FieldTag::StreamFunction);

    FomState state = initial_state(omega0);
    out.diagnostics.times.push_back(state.time);
    out.diagnostics.enstrophy.push_back(enstrophy(state.omega));
    out.diagnostics.total_vorticity.push_back(total_vorticity(state.omega));

    const std::vector<double> params{cfg_.Re, cfg_.gamma};
    const int n_steps = cfg_.num_steps();
    for (int n = 0; n < n_steps; ++n) {
        state = step(state);
        out.diagnostics.times.push_back(state.time);
        out.diagnostics.enstrophy.push_back(enstrophy(state.omega));
        out.diagnostics.total_vorticity.push_back(total_vorticity(state.omega));
        if (state.step % cfg_.snapshot_stride == 0) {
            out.omega_snapshots.add(state.omega, params, state.time);
            out.psi_snapshots.add(state.psi, params, state.time);
        }
    }
    out.diagnostics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return out;
}

}  // namespace sfv
