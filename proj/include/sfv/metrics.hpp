#pragma once

#include "sfv/grid.hpp"

namespace sfv {

struct UndefinedMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 100 * ||fom - rom|| / ||fom|| in the discrete L2 norm.
double error_relative(const ScalarField& fom, const ScalarField& rom);

// Signed percentage 100 * (e_fom - e_rom) / e_fom.
double error_enstrophy(double e_fom, double e_rom);

struct MetricsRecord {
    double time = 0.0;
    double e_psi_percent = 0.0;
    double e_omega_percent = 0.0;
    double e_enstrophy_percent = 0.0;
    double enstrophy_fom = 0.0;
    double enstrophy_rom = 0.0;
};

}  // namespace sfv
