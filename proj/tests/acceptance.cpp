// Acceptance suite for the full pipeline. Each criterion prints exactly one
// PASS/FAIL line; the process exit code is the number of failed criteria.
// Later criteria reuse artifacts produced by earlier ones, so they run in
// order even when an early criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "sfv/study.hpp"

using namespace sfv;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

void run_criterion(int id, const std::string& name, double budget_seconds,
                   const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.pass && budget_seconds > 0.0 && elapsed > budget_seconds) {
        out.pass = false;
        out.detail += (out.detail.empty() ? "" : "; ") + std::string("exceeded ") +
                      std::to_string(static_cast<int>(budget_seconds)) + " s budget";
    }
    if (!out.pass) ++g_failures;
    std::ostringstream line;
    line << '[' << id << "] " << (out.pass ? "PASS" : "FAIL") << "  " << name << " ("
         << std::fixed << std::setprecision(1) << elapsed << " s)";
    if (!out.detail.empty()) line << "  " << out.detail;
    std::cout << line.str() << std::endl;
}

std::string fmt(double v, int prec = 3) {
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

GridPtr square_grid(int n) {
    return std::make_shared<StructuredGrid>(n, n, 2.0 * M_PI, 2.0 * M_PI);
}

// ---- criterion 1: Poisson solver convergence under grid refinement ----

double poisson_error(int n) {
    auto grid = square_grid(n);
    auto rhs = sample_function(
        grid, [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y); });
    auto exact = sample_function(
        grid, [](double x, double y) { return std::sin(x) * std::sin(y); });
    SparseMatrix lap = assemble_laplacian_dirichlet(grid);
    auto sol = cg_solve(lap, rhs.values(), 1e-12);
    ScalarField diff(grid);
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = sol.x[k] - exact[k];
    return l2_norm(diff);
}

Outcome criterion_poisson() {
    double e32 = poisson_error(32), e64 = poisson_error(64), e128 = poisson_error(128);
    double p1 = std::log2(e32 / e64);
    double p2 = std::log2(e64 / e128);
    Outcome out;
    out.pass = p1 >= 1.9 && p2 >= 1.9;
    out.detail = "orders " + fmt(p1) + ", " + fmt(p2) + "; errors " + fmt(e32) + " -> " +
                 fmt(e64) + " -> " + fmt(e128);
    return out;
}

// ---- criterion 2: discrete physics invariants of the unforced solver ----

Outcome criterion_invariants() {
    FomConfig cfg;
    cfg.nx = cfg.ny = 64;
    cfg.Re = 800.0;
    cfg.dt = 0.01;
    cfg.gamma = 0.0;
    cfg.T = 10.0;
    FomSolver solver(cfg);
    FomState state = solver.initial_state();
    double e_prev = enstrophy(state.omega);
    const double tv0 = total_vorticity(state.omega);

    double worst_growth = 0.0, worst_drift = 0.0;
    for (int n = 0; n < 1000; ++n) {
        state = solver.step(state);
        double e = enstrophy(state.omega);
        worst_growth = std::max(worst_growth, e / e_prev - 1.0);
        e_prev = e;
        worst_drift =
            std::max(worst_drift, std::abs(total_vorticity(state.omega) - tv0) / std::abs(tv0));
    }
    // symmetry of the co-rotating pair: point reflection about the center
    double asym = 0.0;
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i)
            asym = std::max(asym, std::abs(state.omega(i, j) - state.omega(63 - i, 63 - j)));

    Outcome out;
    out.pass = worst_growth <= 1e-8 && worst_drift <= 1e-8 && asym <= 1e-6;
    out.detail = "max enstrophy growth " + fmt(worst_growth) + ", vorticity drift " +
                 fmt(worst_drift) + ", asymmetry " + fmt(asym);
    return out;
}

// ---- criterion 3: basis orthonormality and the energy identity ----

Outcome criterion_pod() {
    FomConfig cfg;
    cfg.nx = cfg.ny = 64;
    cfg.T = 4.0;  // 400 steps, stride 8: 50 snapshots
    FomResult res = FomSolver(cfg).run();
    if (res.omega_snapshots.count() != 50)
        return {false, "expected 50 snapshots, got " + std::to_string(res.omega_snapshots.count())};

    PodBasis full = build_basis(res.omega_snapshots, 1e-12);
    PodBasis retained = build_basis(res.omega_snapshots, 1e-5);
    double ortho = 0.0;
    for (std::size_t i = 0; i < retained.retained(); ++i)
        for (std::size_t j = 0; j < retained.retained(); ++j)
            ortho = std::max(ortho, std::abs(l2_inner(retained.modes[i], retained.modes[j]) -
                                             (i == j ? 1.0 : 0.0)));

    double total = 0.0;
    for (double l : full.eigenvalues) total += std::max(l, 0.0);
    double worst_identity = 0.0;
    for (std::size_t n_r : {std::size_t{2}, std::size_t{6}, full.retained() / 2}) {
        PodBasis trunc = build_basis(res.omega_snapshots, 1e-5, n_r);
        double proj_err = 0.0;
        auto grid = res.omega_snapshots.grid_ptr();
        for (const auto& s : res.omega_snapshots.snapshots()) {
            ScalarField rec = reconstruct(project(s.field, trunc), trunc);
            ScalarField diff(grid);
            for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = s.field[k] - rec[k];
            proj_err += l2_inner(diff, diff);
        }
        double tail = 0.0;
        for (std::size_t k = n_r; k < full.eigenvalues.size(); ++k)
            tail += std::max(full.eigenvalues[k], 0.0);
        worst_identity = std::max(worst_identity, std::abs(proj_err - tail) / total);
    }

    Outcome out;
    out.pass = ortho <= 1e-10 && worst_identity <= 1e-6;
    out.detail = "orthonormality defect " + fmt(ortho) + ", energy identity defect " +
                 fmt(worst_identity);
    return out;
}

// shared across criteria 4 and 8
struct FullOrderRun {
    FomConfig cfg;
    FomResult res;
};
std::optional<FullOrderRun> g_run64;

// ---- criterion 4: full-basis reduced model reproduces its own snapshots ----

Outcome criterion_consistency() {
    FomConfig cfg;
    cfg.nx = cfg.ny = 64;
    cfg.T = 10.0;  // 1000 steps, stride 8: 125 snapshots
    FomResult res = FomSolver(cfg).run();
    if (res.omega_snapshots.count() != 125)
        return {false, "expected 125 snapshots, got " +
                           std::to_string(res.omega_snapshots.count())};

    PodBasis basis_omega = build_basis(res.omega_snapshots, 1e-12);
    PodBasis basis_psi = build_basis(res.psi_snapshots, 1e-12);
    ReducedOperators ops = project_operators(basis_omega, basis_psi, cfg.flux_mode);

    GridPtr grid = cfg.make_grid();
    RomResult rom = rom_run(ops, basis_omega, vortex_merger_ic(grid), cfg);
    double max_ew = 0.0, max_ep = 0.0;
    for (std::size_t k = 0; k < rom.times.size(); ++k) {
        ScalarField omega_r = reconstruct(rom.beta_history[k], basis_omega);
        ScalarField psi_r = reconstruct(rom.gamma_history[k], basis_psi);
        max_ew = std::max(max_ew, error_relative(res.omega_snapshots.at(k).field, omega_r));
        max_ep = std::max(max_ep, error_relative(res.psi_snapshots.at(k).field, psi_r));
    }
    g_run64 = FullOrderRun{cfg, std::move(res)};

    Outcome out;
    out.pass = max_ew <= 2.0 && max_ep <= 1.0;
    out.detail = "max E_omega " + fmt(max_ew) + "%, max E_psi " + fmt(max_ep) + "% with " +
                 std::to_string(basis_omega.retained()) + "/" +
                 std::to_string(basis_psi.retained()) + " modes";
    return out;
}

// shared across criteria 5, 8, 9
std::optional<StudyReport> g_recon_report;
const fs::path g_out_root = "acceptance_out";

StudyConfig reconstruction_config(const fs::path& out) {
    StudyConfig cfg = make_time_reconstruction_config();
    cfg.fom.nx = cfg.fom.ny = 128;
    cfg.output_dir = out;
    return cfg;
}

// ---- criterion 5: time reconstruction at the published accuracy ----

Outcome criterion_reconstruction() {
    StudyReport report = run_study(reconstruction_config(g_out_root / "reconstruction"));
    if (report.tests.size() != 1 || !report.tests[0].failure.empty())
        return {false, "study failed: " +
                           (report.tests.empty() ? "no tests" : report.tests[0].failure)};
    const TestReport& t = report.tests[0];
    Outcome out;
    out.pass = t.max_e_psi < 1.0 && t.max_e_omega < 4.0 && t.max_abs_e_enstrophy < 0.5 &&
               report.n_modes_psi < report.n_modes_omega;
    out.detail = "E_psi " + fmt(t.max_e_psi) + "%, E_omega " + fmt(t.max_e_omega) + "%, |E_e| " +
                 fmt(t.max_abs_e_enstrophy) + "%, modes " + std::to_string(report.n_modes_psi) +
                 " psi / " + std::to_string(report.n_modes_omega) + " omega";
    g_recon_report = std::move(report);
    return out;
}

// ---- criterion 6: Reynolds sweep generalization ----

Outcome criterion_re_sweep() {
    StudyConfig cfg = make_re_sweep_config();
    cfg.fom.nx = cfg.fom.ny = 64;
    cfg.test = {{100.0, 0.09}, {500.0, 0.09}};
    cfg.output_dir = g_out_root / "re_sweep";
    StudyReport report = run_study(cfg);
    const TestReport* t100 = nullptr;
    const TestReport* t500 = nullptr;
    for (const auto& t : report.tests) {
        if (!t.failure.empty()) return {false, "test Re=" + fmt(t.params.Re) + ": " + t.failure};
        if (t.params.Re == 100.0) t100 = &t;
        if (t.params.Re == 500.0) t500 = &t;
    }
    if (!t100 || !t500) return {false, "missing test points"};

    Outcome out;
    out.pass = t500->max_e_psi < 3.0 && t500->max_e_omega < 3.0 &&
               t100->max_e_psi > t500->max_e_psi && t100->max_e_omega > t500->max_e_omega;
    out.detail = "Re=500 E_psi " + fmt(t500->max_e_psi) + "% E_omega " + fmt(t500->max_e_omega) +
                 "%; Re=100 E_psi " + fmt(t100->max_e_psi) + "% E_omega " +
                 fmt(t100->max_e_omega) + "%";
    return out;
}

// ---- criterion 7: forcing-strength sweep generalization ----

Outcome criterion_gamma_sweep() {
    StudyConfig cfg = make_gamma_sweep_config();
    cfg.fom.nx = cfg.fom.ny = 64;
    cfg.output_dir = g_out_root / "gamma_sweep";
    StudyReport report = run_study(cfg);
    const TestReport* interp = nullptr;
    double extrap_psi = 0.0, extrap_omega = 0.0;
    for (const auto& t : report.tests) {
        if (!t.failure.empty())
            return {false, "test gamma=" + fmt(t.params.gamma) + ": " + t.failure};
        if (t.interpolatory) {
            interp = &t;
        } else {
            extrap_psi = std::max(extrap_psi, t.max_e_psi);
            extrap_omega = std::max(extrap_omega, t.max_e_omega);
        }
    }
    if (!interp) return {false, "no interpolatory test point"};

    Outcome out;
    out.pass = interp->max_e_psi < 1.5 && interp->max_e_omega < 3.0 &&
               extrap_psi <= 3.0 * interp->max_e_psi && extrap_omega <= 3.0 * interp->max_e_omega;
    out.detail = "gamma=0.075 E_psi " + fmt(interp->max_e_psi) + "% E_omega " +
                 fmt(interp->max_e_omega) + "%; worst extrapolation E_psi " + fmt(extrap_psi) +
                 "% E_omega " + fmt(extrap_omega) + "%";
    return out;
}

// ---- criterion 8: online speedup and grid-independent online cost ----

double min_online_seconds(const ReducedOperators& ops, const PodBasis& basis,
                          const ScalarField& omega0, const FomConfig& cfg, int samples,
                          int runs_per_sample) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        double total = 0.0;
        for (int r = 0; r < runs_per_sample; ++r)
            total += rom_run(ops, basis, omega0, cfg).online_seconds;
        best = std::min(best, total / runs_per_sample);
    }
    return best;
}

Outcome criterion_cost() {
    if (!g_recon_report || !g_run64) return {false, "depends on criteria 4 and 5 artifacts"};
    const TestReport& t = g_recon_report->tests.at(0);
    double speedup = t.fom_seconds / std::max(t.online_seconds, 1e-12);

    // same mode counts on both grids so the online work is identical
    const std::size_t nw = g_recon_report->n_modes_omega;
    const std::size_t np = g_recon_report->n_modes_psi;

    const fs::path dir = g_out_root / "reconstruction";
    StudyConfig cfg128 = reconstruction_config(dir);
    GridPtr grid128 = cfg128.fom.make_grid();
    PodBasis bw128 = load_basis(dir / "basis_omega.bin", grid128);
    ReducedOperators ops128 = load_operators(dir / "operators.bin");

    PodBasis bw64 = build_basis(g_run64->res.omega_snapshots, 1e-5, nw);
    PodBasis bp64 = build_basis(g_run64->res.psi_snapshots, 1e-5, np);
    if (bw64.retained() != nw || bp64.retained() != np)
        return {false, "could not match mode counts across grids"};
    ReducedOperators ops64 = project_operators(bw64, bp64, g_run64->cfg.flux_mode);

    ScalarField w0_128 = vortex_merger_ic(grid128);
    ScalarField w0_64 = vortex_merger_ic(g_run64->cfg.make_grid());
    double t128 = min_online_seconds(ops128, bw128, w0_128, cfg128.fom, 8, 5);
    double t64 = min_online_seconds(ops64, bw64, w0_64, g_run64->cfg, 8, 5);
    double rel = std::abs(t128 - t64) / std::max(t128, t64);

    Outcome out;
    out.pass = speedup >= 20.0 && rel < 0.10;
    out.detail = "speedup " + fmt(speedup, 4) + "x; per-step cost " + fmt(t64 / 1000.0 * 1e6) +
                 " vs " + fmt(t128 / 1000.0 * 1e6) + " us (" + fmt(rel * 100.0) + "% apart)";
    return out;
}

// ---- criterion 9: bitwise reproducibility of the whole pipeline ----

std::vector<char> file_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw IoError("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome criterion_determinism() {
    if (!g_recon_report) return {false, "depends on criterion 5 artifacts"};
    StudyReport repeat = run_study(reconstruction_config(g_out_root / "reconstruction_repeat"));
    if (repeat.tests.size() != 1 || !repeat.tests[0].failure.empty())
        return {false, "repeat study failed"};

    for (const char* name : {"omega_snapshots.bin", "psi_snapshots.bin", "basis_omega.bin",
                             "basis_psi.bin", "operators.bin"}) {
        if (file_bytes(g_out_root / "reconstruction" / name) !=
            file_bytes(g_out_root / "reconstruction_repeat" / name))
            return {false, std::string(name) + " differs between runs"};
    }

    const auto& a = g_recon_report->tests[0].metrics;
    const auto& b = repeat.tests[0].metrics;
    if (a.size() != b.size()) return {false, "metric series lengths differ"};
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k].e_psi_percent - b[k].e_psi_percent));
        worst = std::max(worst, std::abs(a[k].e_omega_percent - b[k].e_omega_percent));
        worst = std::max(worst, std::abs(a[k].e_enstrophy_percent - b[k].e_enstrophy_percent));
    }
    Outcome out;
    out.pass = worst <= 1e-12;
    out.detail = "snapshot files identical; max metric difference " + fmt(worst);
    return out;
}

}  // namespace

int main() {
    std::cout << "acceptance suite\n";
    fs::create_directories(g_out_root);

    run_criterion(1, "poisson solver second-order convergence", 30.0, criterion_poisson);
    run_criterion(2, "unforced solver invariants over 1000 steps", 120.0, criterion_invariants);
    run_criterion(3, "basis orthonormality and energy identity", 60.0, criterion_pod);
    run_criterion(4, "full-basis reduced model consistency", 300.0, criterion_consistency);
    run_criterion(5, "time reconstruction accuracy", 900.0, criterion_reconstruction);
    run_criterion(6, "Reynolds sweep generalization", 2700.0, criterion_re_sweep);
    run_criterion(7, "forcing sweep generalization", 2700.0, criterion_gamma_sweep);
    run_criterion(8, "online speedup and grid-independent cost", 600.0, criterion_cost);
    run_criterion(9, "bitwise reproducibility", 900.0, criterion_determinism);

    std::cout << (g_failures == 0 ? "all criteria passed" :
                                    std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures;
}
