#include "sfv/metrics.hpp"

namespace sfv {

double error_relative(const ScalarField& fom, const ScalarField& rom) {
    if (!fom.grid().same_as(rom.grid()))
        throw std::invalid_argument("error_relative: fields live on different grids");
    const double denom = l2_norm(fom);
    if (denom == 0.0)
        throw UndefinedMetricError("error_relative: reference field has zero norm");
    ScalarField diff(fom.grid_ptr());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = fom[k] - rom[k];
    return 100.0 * l2_norm(diff) / denom;
}

double error_enstrophy(double e_fom, double e_rom) {
    if (e_fom == 0.0)
        throw UndefinedMetricError("error_enstrophy: reference enstrophy is zero");
    return 100.0 * (e_fom - e_rom) / e_fom;
}

}  // namespace sfv
