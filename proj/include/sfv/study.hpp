#pragma once

#include "sfv/io.hpp"
#include "sfv/metrics.hpp"

namespace sfv {

enum class StudyKind { TimeReconstruction, ReSweep, GammaSweep, Custom };

StudyKind study_kind_from_string(const std::string& s);
std::string to_string(StudyKind kind);

struct ParamPoint {
    double Re;
    double gamma;
};

struct StudyConfig {
    StudyKind kind = StudyKind::TimeReconstruction;
    FomConfig fom;  // template; Re/gamma overridden per parameter point
    std::vector<ParamPoint> training;
    std::vector<ParamPoint> test;
    double threshold_omega = 1e-5;
    double threshold_psi = 1e-5;
    std::optional<std::size_t> fixed_count_omega;
    std::optional<std::size_t> fixed_count_psi;
    bool compare_with_fom = true;  // rerun the FOM at each test point for metrics
    std::filesystem::path output_dir = "study_out";

    void validate() const;
};

// Standard benchmark configurations.
StudyConfig make_time_reconstruction_config();
StudyConfig make_re_sweep_config();
StudyConfig make_gamma_sweep_config();

struct TestReport {
    ParamPoint params;
    bool interpolatory = false;
    std::vector<MetricsRecord> metrics;  // empty when compare_with_fom is off
    double max_e_psi = 0.0;
    double max_e_omega = 0.0;
    double max_abs_e_enstrophy = 0.0;
    double online_seconds = 0.0;
    double fom_seconds = 0.0;
    std::string failure;  // nonempty when this test point failed
};

struct StudyReport {
    StudyConfig config;
    std::size_t n_snapshots = 0;
    std::size_t n_modes_omega = 0;
    std::size_t n_modes_psi = 0;
    double offline_seconds = 0.0;  // training FOM runs + POD + projection
    std::vector<TestReport> tests;
};

// Offline: run the FOM over the training set, pool snapshots into one global
// set per variable, build bases and reduced operators, persist everything.
// Online: march the ROM for each test point; when compare_with_fom is set,
// rerun the FOM there and emit error time series. Writes snapshot/basis/
// operator files, per-test CSVs, spectrum CSVs and a JSON manifest under
// config.output_dir.
StudyReport run_study(const StudyConfig& config);

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricsRecord>& metrics);
void write_spectrum_csv(const std::filesystem::path& path, const DenseVector& eigenvalues);

}  // namespace sfv
