#include "sfv/study.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace sfv {

StudyKind study_kind_from_string(const std::string& s) {
    if (s == "time-reconstruction") return StudyKind::TimeReconstruction;
    if (s == "re-sweep") return StudyKind::ReSweep;
    if (s == "gamma-sweep") return StudyKind::GammaSweep;
    if (s == "custom") return StudyKind::Custom;
    throw ConfigError("unknown study kind: " + s);
}

std::string to_string(StudyKind kind) {
    switch (kind) {
        case StudyKind::TimeReconstruction: return "time-reconstruction";
        case StudyKind::ReSweep: return "re-sweep";
        case StudyKind::GammaSweep: return "gamma-sweep";
        default: return "custom";
    }
}

void StudyConfig::validate() const {
    fom.validate();
    if (training.empty()) throw ConfigError("StudyConfig: training set is empty");
    if (!fixed_count_omega && (threshold_omega <= 0.0 || threshold_omega >= 1.0))
        throw ConfigError("StudyConfig: omega threshold must lie in (0,1)");
    if (!fixed_count_psi && (threshold_psi <= 0.0 || threshold_psi >= 1.0))
        throw ConfigError("StudyConfig: psi threshold must lie in (0,1)");
}

StudyConfig make_time_reconstruction_config() {
    StudyConfig cfg;
    cfg.kind = StudyKind::TimeReconstruction;
    cfg.fom.Re = 800.0;
    cfg.fom.gamma = 0.0;
    cfg.fom.T = 10.0;
    cfg.training = {{800.0, 0.0}};
    cfg.test = {{800.0, 0.0}};
    return cfg;
}

StudyConfig make_re_sweep_config() {
    StudyConfig cfg;
    cfg.kind = StudyKind::ReSweep;
    cfg.fom.gamma = 0.09;
    cfg.fom.T = 10.0;
    for (double re : {200.0, 400.0, 600.0, 800.0}) cfg.training.push_back({re, 0.09});
    for (double re : {100.0, 500.0, 1000.0}) cfg.test.push_back({re, 0.09});
    return cfg;
}

StudyConfig make_gamma_sweep_config() {
    StudyConfig cfg;
    cfg.kind = StudyKind::GammaSweep;
    cfg.fom.Re = 800.0;
    cfg.fom.T = 10.0;
    // slightly richer basis than the default: keeps the extrapolatory test
    // errors comparable to the interpolatory ones on coarse grids
    cfg.threshold_omega = 1e-6;
    cfg.threshold_psi = 1e-6;
    for (double g : {0.06, 0.07, 0.08, 0.09}) cfg.training.push_back({800.0, g});
    for (double g : {0.05, 0.075, 0.1}) cfg.test.push_back({800.0, g});
    return cfg;
}

namespace {

FomConfig with_params(const FomConfig& tpl, const ParamPoint& p) {
    FomConfig cfg = tpl;
    cfg.Re = p.Re;
    cfg.gamma = p.gamma;
    return cfg;
}

bool is_interpolatory(const StudyConfig& cfg, const ParamPoint& p) {
    auto in_range = [](double v, auto proj, const std::vector<ParamPoint>& pts) {
        double lo = proj(pts.front()), hi = lo;
        for (const auto& q : pts) {
            lo = std::min(lo, proj(q));
            hi = std::max(hi, proj(q));
        }
        return v >= lo && v <= hi;
    };
    auto re_of = [](const ParamPoint& q) { return q.Re; };
    auto gamma_of = [](const ParamPoint& q) { return q.gamma; };
    switch (cfg.kind) {
        case StudyKind::TimeReconstruction: return true;
        case StudyKind::ReSweep: return in_range(p.Re, re_of, cfg.training);
        case StudyKind::GammaSweep: return in_range(p.gamma, gamma_of, cfg.training);
        default:
            return in_range(p.Re, re_of, cfg.training) &&
                   in_range(p.gamma, gamma_of, cfg.training);
    }
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << std::setprecision(17);
    return os;
}

std::string test_label(const ParamPoint& p) {
    std::ostringstream ss;
    ss << "Re" << p.Re << "_gamma" << p.gamma;
    std::string s = ss.str();
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

}  // namespace

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricsRecord>& metrics) {
    auto os = open_csv(path);
    os << "t,E_psi,E_omega,E_e,e_fom,e_rom\n";
    for (const auto& m : metrics)
        os << m.time << ',' << m.e_psi_percent << ',' << m.e_omega_percent << ','
           << m.e_enstrophy_percent << ',' << m.enstrophy_fom << ',' << m.enstrophy_rom << '\n';
}

void write_spectrum_csv(const std::filesystem::path& path, const DenseVector& eigenvalues) {
    auto os = open_csv(path);
    double sum = 0.0;
    for (double l : eigenvalues) sum += std::max(l, 0.0);
    os << "k,lambda,lambda_rel\n";
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
        os << k + 1 << ',' << eigenvalues[k] << ','
           << (sum > 0.0 ? eigenvalues[k] / sum : 0.0) << '\n';
}

StudyReport run_study(const StudyConfig& config) {
    using clock = std::chrono::steady_clock;
    config.validate();
    const auto& out_dir = config.output_dir;
    std::filesystem::create_directories(out_dir);

    StudyReport report;
    report.config = config;

    // --- offline phase ---
    const auto offline_start = clock::now();
    SnapshotSet omega_set(FieldTag::Vorticity);
    SnapshotSet psi_set(FieldTag::StreamFunction);
    for (const auto& p : config.training) {
        FomSolver solver(with_params(config.fom, p));
        FomResult res = solver.run();
        omega_set.append(res.omega_snapshots);
        psi_set.append(res.psi_snapshots);
    }
    report.n_snapshots = omega_set.count();

    save_snapshot_set(out_dir / "omega_snapshots.bin", omega_set);
    save_snapshot_set(out_dir / "psi_snapshots.bin", psi_set);

    PodBasis basis_omega = build_basis(omega_set, config.threshold_omega, config.fixed_count_omega);
    PodBasis basis_psi = build_basis(psi_set, config.threshold_psi, config.fixed_count_psi);
    report.n_modes_omega = basis_omega.retained();
    report.n_modes_psi = basis_psi.retained();
    save_basis(out_dir / "basis_omega.bin", basis_omega);
    save_basis(out_dir / "basis_psi.bin", basis_psi);
    write_spectrum_csv(out_dir / "spectrum_omega.csv", basis_omega.eigenvalues);
    write_spectrum_csv(out_dir / "spectrum_psi.csv", basis_psi.eigenvalues);

    ReducedOperators ops = project_operators(basis_omega, basis_psi, config.fom.flux_mode);
    save_operators(out_dir / "operators.bin", ops);
    report.offline_seconds = std::chrono::duration<double>(clock::now() - offline_start).count();

    // --- online phase ---
    GridPtr grid = config.fom.make_grid();
    ScalarField omega0 = vortex_merger_ic(grid);
    for (const auto& p : config.test) {
        TestReport test;
        test.params = p;
        test.interpolatory = is_interpolatory(config, p);
        try {
            FomConfig cfg_t = with_params(config.fom, p);
            RomResult rom = rom_run(ops, basis_omega, omega0, cfg_t);
            test.online_seconds = rom.online_seconds;

            if (config.compare_with_fom) {
                FomSolver solver(cfg_t);
                FomResult fom = solver.run();
                test.fom_seconds = fom.diagnostics.wall_seconds;
                if (fom.omega_snapshots.count() != rom.times.size())
                    throw std::logic_error("run_study: FOM/ROM snapshot count mismatch");
                for (std::size_t k = 0; k < rom.times.size(); ++k) {
                    ScalarField omega_r = reconstruct(rom.beta_history[k], basis_omega);
                    ScalarField psi_r = reconstruct(rom.gamma_history[k], basis_psi);
                    MetricsRecord m;
                    m.time = rom.times[k];
                    m.e_omega_percent = error_relative(fom.omega_snapshots.at(k).field, omega_r);
                    m.e_psi_percent = error_relative(fom.psi_snapshots.at(k).field, psi_r);
                    m.enstrophy_fom = enstrophy(fom.omega_snapshots.at(k).field);
                    m.enstrophy_rom = enstrophy(omega_r);
                    m.e_enstrophy_percent = error_enstrophy(m.enstrophy_fom, m.enstrophy_rom);
                    test.max_e_psi = std::max(test.max_e_psi, m.e_psi_percent);
                    test.max_e_omega = std::max(test.max_e_omega, m.e_omega_percent);
                    test.max_abs_e_enstrophy =
                        std::max(test.max_abs_e_enstrophy, std::abs(m.e_enstrophy_percent));
                    test.metrics.push_back(m);
                }
                write_metrics_csv(out_dir / ("errors_" + test_label(p) + ".csv"), test.metrics);
            }
        } catch (const std::exception& e) {
            test.failure = e.what();
        }
        report.tests.push_back(std::move(test));
    }

    // --- manifest ---
    nlohmann::json manifest;
    manifest["study"] = to_string(config.kind);
    manifest["grid"] = {{"nx", config.fom.nx}, {"ny", config.fom.ny},
                        {"lx", config.fom.lx}, {"ly", config.fom.ly}};
    manifest["fom"] = {{"dt", config.fom.dt},
                       {"t0", config.fom.t0},
                       {"T", config.fom.T},
                       {"snapshot_stride", config.fom.snapshot_stride},
                       {"flux_mode", to_string(config.fom.flux_mode)},
                       {"solver_tol", config.fom.solver_tol}};
    manifest["thresholds"] = {{"omega", config.threshold_omega}, {"psi", config.threshold_psi}};
    for (const auto& p : config.training)
        manifest["training"].push_back({{"Re", p.Re}, {"gamma", p.gamma}});
    manifest["n_snapshots"] = report.n_snapshots;
    manifest["n_modes"] = {{"omega", report.n_modes_omega}, {"psi", report.n_modes_psi}};
    manifest["offline_seconds"] = report.offline_seconds;
    manifest["files"] = {"omega_snapshots.bin", "psi_snapshots.bin", "basis_omega.bin",
                         "basis_psi.bin",       "operators.bin",     "spectrum_omega.csv",
                         "spectrum_psi.csv"};
    for (const auto& t : report.tests) {
        nlohmann::json jt = {{"Re", t.params.Re},
                             {"gamma", t.params.gamma},
                             {"interpolatory", t.interpolatory},
                             {"online_seconds", t.online_seconds}};
        if (!t.failure.empty()) {
            jt["failure"] = t.failure;
        } else if (!t.metrics.empty()) {
            jt["max_E_psi"] = t.max_e_psi;
            jt["max_E_omega"] = t.max_e_omega;
            jt["max_abs_E_e"] = t.max_abs_e_enstrophy;
            jt["fom_seconds"] = t.fom_seconds;
            jt["errors_csv"] = "errors_" + test_label(t.params) + ".csv";
        }
        manifest["tests"].push_back(jt);
    }
    std::ofstream mos(out_dir / "manifest.json");
    if (!mos) throw IoError("cannot write manifest");
    mos << manifest.dump(2) << '\n';

    return report;
}

}  // namespace sfv
