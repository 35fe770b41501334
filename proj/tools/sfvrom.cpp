// Command-line front end for the stream function-vorticity FOM/ROM pipeline.
//
//   sfvrom fom      --config cfg.json [overrides]   run the full order solver
//   sfvrom pod      --in dir --out dir              build POD bases from snapshots
//   sfvrom offline  --config cfg.json               training sweep + POD + projection
//   sfvrom rom      --in dir [overrides]            online reduced solve
//   sfvrom compare  --in dir [overrides]            online solve + FOM reference errors
//   sfvrom study    --config cfg.json               full offline/online benchmark study

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "sfv/study.hpp"

namespace {

struct Overrides {
    std::optional<double> re, gamma, dt, tend, threshold;
    std::optional<int> grid;
    std::optional<std::string> out;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--re", ov.re, "Reynolds number");
    cmd->add_option("--gamma", ov.gamma, "forcing strength");
    cmd->add_option("--grid", ov.grid, "cells per direction (square grid)");
    cmd->add_option("--dt", ov.dt, "time step");
    cmd->add_option("--tend", ov.tend, "end time");
    cmd->add_option("--threshold", ov.threshold, "POD eigenvalue threshold (both variables)");
    cmd->add_option("--out", ov.out, "output directory");
}

sfv::StudyConfig load_config(const std::string& path, const Overrides& ov) {
    sfv::StudyConfig cfg;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw sfv::ConfigError("cannot open config: " + path);
        nlohmann::json j = nlohmann::json::parse(is);

        if (j.contains("study")) {
            std::string kind = j["study"].get<std::string>();
            if (kind == "time-reconstruction") cfg = sfv::make_time_reconstruction_config();
            else if (kind == "re-sweep") cfg = sfv::make_re_sweep_config();
            else if (kind == "gamma-sweep") cfg = sfv::make_gamma_sweep_config();
            else cfg.kind = sfv::study_kind_from_string(kind);
        }
        auto& f = cfg.fom;
        if (j.contains("grid")) {
            f.nx = j["grid"].value("nx", f.nx);
            f.ny = j["grid"].value("ny", f.ny);
            f.lx = j["grid"].value("lx", f.lx);
            f.ly = j["grid"].value("ly", f.ly);
        }
        f.Re = j.value("re", f.Re);
        f.gamma = j.value("gamma", f.gamma);
        f.dt = j.value("dt", f.dt);
        f.t0 = j.value("t0", f.t0);
        f.T = j.value("tend", f.T);
        f.snapshot_stride = j.value("stride", f.snapshot_stride);
        f.solver_tol = j.value("solver_tol", f.solver_tol);
        if (j.contains("flux_mode"))
            f.flux_mode = sfv::flux_mode_from_string(j["flux_mode"].get<std::string>());
        if (j.contains("threshold")) {
            cfg.threshold_omega = j["threshold"].get<double>();
            cfg.threshold_psi = cfg.threshold_omega;
        }
        cfg.threshold_omega = j.value("threshold_omega", cfg.threshold_omega);
        cfg.threshold_psi = j.value("threshold_psi", cfg.threshold_psi);
        if (j.contains("training")) {
            cfg.training.clear();
            for (const auto& p : j["training"])
                cfg.training.push_back({p.value("re", f.Re), p.value("gamma", f.gamma)});
        }
        if (j.contains("test")) {
            cfg.test.clear();
            for (const auto& p : j["test"])
                cfg.test.push_back({p.value("re", f.Re), p.value("gamma", f.gamma)});
        }
        if (j.contains("out")) cfg.output_dir = j["out"].get<std::string>();
    }

    if (ov.re) cfg.fom.Re = *ov.re;
    if (ov.gamma) cfg.fom.gamma = *ov.gamma;
    if (ov.grid) cfg.fom.nx = cfg.fom.ny = *ov.grid;
    if (ov.dt) cfg.fom.dt = *ov.dt;
    if (ov.tend) cfg.fom.T = *ov.tend;
    if (ov.threshold) cfg.threshold_omega = cfg.threshold_psi = *ov.threshold;
    if (ov.out) cfg.output_dir = *ov.out;

    if (cfg.training.empty()) cfg.training = {{cfg.fom.Re, cfg.fom.gamma}};
    if (cfg.test.empty()) cfg.test = {{cfg.fom.Re, cfg.fom.gamma}};
    return cfg;
}

void write_diagnostics_csv(const std::filesystem::path& path, const sfv::FomDiagnostics& d) {
    std::ofstream os(path);
    os << std::setprecision(17) << "t,enstrophy,total_vorticity\n";
    for (std::size_t k = 0; k < d.times.size(); ++k)
        os << d.times[k] << ',' << d.enstrophy[k] << ',' << d.total_vorticity[k] << '\n';
}

void write_coefficients_csv(const std::filesystem::path& path, const sfv::RomResult& rom) {
    std::ofstream os(path);
    os << std::setprecision(17) << "t";
    if (!rom.beta_history.empty()) {
        for (std::size_t i = 0; i < rom.beta_history.front().size(); ++i) os << ",beta" << i + 1;
        for (std::size_t i = 0; i < rom.gamma_history.front().size(); ++i) os << ",gamma" << i + 1;
    }
    os << '\n';
    for (std::size_t k = 0; k < rom.times.size(); ++k) {
        os << rom.times[k];
        for (double v : rom.beta_history[k]) os << ',' << v;
        for (double v : rom.gamma_history[k]) os << ',' << v;
        os << '\n';
    }
}

int cmd_fom(const sfv::StudyConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    sfv::FomSolver solver(cfg.fom);
    sfv::FomResult res = solver.run();
    sfv::save_snapshot_set(cfg.output_dir / "omega_snapshots.bin", res.omega_snapshots);
    sfv::save_snapshot_set(cfg.output_dir / "psi_snapshots.bin", res.psi_snapshots);
    write_diagnostics_csv(cfg.output_dir / "diagnostics.csv", res.diagnostics);
    std::cout << "fom: " << res.omega_snapshots.count() << " snapshots in "
              << res.diagnostics.wall_seconds << " s -> " << cfg.output_dir.string() << '\n';
    return 0;
}

int cmd_pod(const sfv::StudyConfig& cfg, const std::string& in_dir) {
    std::filesystem::path in = in_dir.empty() ? cfg.output_dir : std::filesystem::path(in_dir);
    std::filesystem::create_directories(cfg.output_dir);
    sfv::SnapshotSet omega_set = sfv::load_snapshot_set(in / "omega_snapshots.bin");
    sfv::SnapshotSet psi_set = sfv::load_snapshot_set(in / "psi_snapshots.bin");
    sfv::PodBasis bo = sfv::build_basis(omega_set, cfg.threshold_omega, cfg.fixed_count_omega);
    sfv::PodBasis bp = sfv::build_basis(psi_set, cfg.threshold_psi, cfg.fixed_count_psi);
    sfv::save_basis(cfg.output_dir / "basis_omega.bin", bo);
    sfv::save_basis(cfg.output_dir / "basis_psi.bin", bp);
    sfv::write_spectrum_csv(cfg.output_dir / "spectrum_omega.csv", bo.eigenvalues);
    sfv::write_spectrum_csv(cfg.output_dir / "spectrum_psi.csv", bp.eigenvalues);
    std::cout << "pod: " << bo.retained() << " omega modes, " << bp.retained()
              << " psi modes from " << omega_set.count() << " snapshots\n";
    return 0;
}

int cmd_offline(sfv::StudyConfig cfg) {
    cfg.test.clear();
    cfg.compare_with_fom = false;
    sfv::StudyReport rep = sfv::run_study(cfg);
    std::cout << "offline: " << rep.n_snapshots << " snapshots, " << rep.n_modes_omega
              << " omega modes, " << rep.n_modes_psi << " psi modes in " << rep.offline_seconds
              << " s -> " << cfg.output_dir.string() << '\n';
    return 0;
}

int cmd_rom(const sfv::StudyConfig& cfg, const std::string& in_dir, bool with_compare) {
    std::filesystem::path in = in_dir.empty() ? cfg.output_dir : std::filesystem::path(in_dir);
    std::filesystem::create_directories(cfg.output_dir);
    sfv::GridPtr grid = cfg.fom.make_grid();
    sfv::PodBasis bo = sfv::load_basis(in / "basis_omega.bin", grid);
    sfv::PodBasis bp = sfv::load_basis(in / "basis_psi.bin", grid);
    sfv::Fingerprint expected{grid->nx(), grid->ny(), grid->lx(), grid->ly(),
                              bo.retained(), bp.retained()};
    sfv::ReducedOperators ops = sfv::load_operators(in / "operators.bin", &expected);

    sfv::ScalarField omega0 = sfv::vortex_merger_ic(grid);
    sfv::RomResult rom = sfv::rom_run(ops, bo, omega0, cfg.fom);
    write_coefficients_csv(cfg.output_dir / "rom_coefficients.csv", rom);
    std::cout << "rom: " << rom.times.size() << " recorded steps, online "
              << rom.online_seconds << " s\n";

    if (with_compare) {
        sfv::FomSolver solver(cfg.fom);
        sfv::FomResult fom = solver.run();
        std::vector<sfv::MetricsRecord> metrics;
        double max_psi = 0.0, max_omega = 0.0;
        for (std::size_t k = 0; k < rom.times.size(); ++k) {
            sfv::ScalarField omega_r = sfv::reconstruct(rom.beta_history[k], bo);
            sfv::ScalarField psi_r = sfv::reconstruct(rom.gamma_history[k], bp);
            sfv::MetricsRecord m;
            m.time = rom.times[k];
            m.e_omega_percent = sfv::error_relative(fom.omega_snapshots.at(k).field, omega_r);
            m.e_psi_percent = sfv::error_relative(fom.psi_snapshots.at(k).field, psi_r);
            m.enstrophy_fom = sfv::enstrophy(fom.omega_snapshots.at(k).field);
            m.enstrophy_rom = sfv::enstrophy(omega_r);
            m.e_enstrophy_percent = sfv::error_enstrophy(m.enstrophy_fom, m.enstrophy_rom);
            max_psi = std::max(max_psi, m.e_psi_percent);
            max_omega = std::max(max_omega, m.e_omega_percent);
            metrics.push_back(m);
        }
        sfv::write_metrics_csv(cfg.output_dir / "errors.csv", metrics);
        std::cout << "compare: max E_psi " << max_psi << " %, max E_omega " << max_omega
                  << " %, FOM " << fom.diagnostics.wall_seconds << " s, speedup "
                  << fom.diagnostics.wall_seconds / rom.online_seconds << "x\n";
    }
    return 0;
}

int cmd_study(const sfv::StudyConfig& cfg) {
    sfv::StudyReport rep = sfv::run_study(cfg);
    std::cout << "study " << to_string(cfg.kind) << ": " << rep.n_snapshots << " snapshots, "
              << rep.n_modes_omega << " omega modes, " << rep.n_modes_psi << " psi modes, offline "
              << rep.offline_seconds << " s\n";
    int failures = 0;
    for (const auto& t : rep.tests) {
        std::cout << "  Re=" << t.params.Re << " gamma=" << t.params.gamma
                  << (t.interpolatory ? " (interp)" : " (extrap)");
        if (!t.failure.empty()) {
            std::cout << " FAILED: " << t.failure << '\n';
            ++failures;
        } else if (!t.metrics.empty()) {
            std::cout << " max E_psi " << t.max_e_psi << " % max E_omega " << t.max_e_omega
                      << " % online " << t.online_seconds << " s\n";
        } else {
            std::cout << " online " << t.online_seconds << " s\n";
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POD-Galerkin reduced order modeling of the 2D stream function-vorticity "
                 "Navier-Stokes equations"};
    app.require_subcommand(1);

    std::string config_path, in_dir;
    Overrides ov;

    auto* fom = app.add_subcommand("fom", "run the full order solver");
    auto* pod = app.add_subcommand("pod", "build POD bases from saved snapshots");
    auto* offline = app.add_subcommand("offline", "training sweep + POD + operator projection");
    auto* rom = app.add_subcommand("rom", "online reduced solve from saved bases/operators");
    auto* compare = app.add_subcommand("compare", "online solve plus FOM reference errors");
    auto* study = app.add_subcommand("study", "full offline/online benchmark study");

    for (auto* cmd : {fom, pod, offline, rom, compare, study}) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        add_override_flags(cmd, ov);
    }
    for (auto* cmd : {pod, rom, compare})
        cmd->add_option("--in", in_dir, "directory with saved offline artifacts");

    CLI11_PARSE(app, argc, argv);

    try {
        sfv::StudyConfig cfg = load_config(config_path, ov);
        if (fom->parsed()) return cmd_fom(cfg);
        if (pod->parsed()) return cmd_pod(cfg, in_dir);
        if (offline->parsed()) return cmd_offline(cfg);
        if (rom->parsed()) return cmd_rom(cfg, in_dir, false);
        if (compare->parsed()) return cmd_rom(cfg, in_dir, true);
        if (study->parsed()) return cmd_study(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
