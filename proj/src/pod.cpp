#include "sfv/pod.hpp"

#include <cmath>

namespace sfv {

void SnapshotSet::add(ScalarField field, std::vector<double> parameters, double time) {
    if (!snapshots_.empty() && !field.grid().same_as(snapshots_.front().field.grid()))
        throw std::invalid_argument("SnapshotSet::add: grid mismatch");
    snapshots_.push_back({std::move(field), std::move(parameters), time});
}

void SnapshotSet::append(const SnapshotSet& other) {
    for (const auto& s : other.snapshots()) add(s.field, s.parameters, s.time);
}

GridPtr SnapshotSet::grid_ptr() const {
    if (snapshots_.empty()) throw std::logic_error("SnapshotSet::grid_ptr: empty set");
    return snapshots_.front().field.grid_ptr();
}

DenseMatrix correlation_matrix(const SnapshotSet& snapshots) {
    const std::size_t n = snapshots.count();
    if (n == 0) throw std::invalid_argument("correlation_matrix: empty snapshot set");
    DenseMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v = l2_inner(snapshots.at(i).field, snapshots.at(j).field);
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return c;
}

PodBasis build_basis(const SnapshotSet& snapshots, double threshold,
                     std::optional<std::size_t> fixed_count) {
    const std::size_t n = snapshots.count();
    if (n == 0) throw std::invalid_argument("build_basis: empty snapshot set");
    if (!fixed_count && (threshold <= 0.0 || threshold >= 1.0))
        throw std::invalid_argument("build_basis: threshold must lie in (0,1)");
    if (fixed_count && (*fixed_count < 1 || *fixed_count > n))
        throw std::invalid_argument("build_basis: fixed_count out of range");

    DenseMatrix c = correlation_matrix(snapshots);
    EigenDecomposition eig = sym_eig(c);

    double lambda_sum = 0.0;
    for (double l : eig.eigenvalues) lambda_sum += std::max(l, 0.0);
    if (lambda_sum <= 0.0 || eig.eigenvalues[0] <= 0.0)
        throw EmptyBasisError("build_basis: snapshot set has no energy");

    const std::size_t rank = snapshot_rank(eig.eigenvalues);
    std::size_t n_r;
    if (fixed_count) {
        n_r = std::min(*fixed_count, rank);
    } else {
        n_r = 0;
        while (n_r < rank && eig.eigenvalues[n_r] / lambda_sum >= threshold) ++n_r;
        if (n_r == 0) throw EmptyBasisError("build_basis: threshold retains no modes");
    }

    PodBasis basis;
    basis.eigenvalues = eig.eigenvalues;
    basis.threshold = fixed_count ? 0.0 : threshold;
    basis.variable = snapshots.variable();

    GridPtr grid = snapshots.grid_ptr();
    for (std::size_t k = 0; k < n_r; ++k) {
        ScalarField mode(grid, snapshots.variable());
        const double inv_sqrt_lambda = 1.0 / std::sqrt(eig.eigenvalues[k]);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = eig.eigenvectors(j, k) * inv_sqrt_lambda;
            const auto& src = snapshots.at(j).field.values();
            auto& dst = mode.values();
            for (std::size_t m = 0; m < dst.size(); ++m) dst[m] += w * src[m];
        }
        // roundoff guard
        const double nrm = l2_norm(mode);
        // sign fixed by the largest-magnitude entry for reproducibility
        double peak = 0.0;
        for (double v : mode.values())
            if (std::abs(v) > std::abs(peak)) peak = v;
        const double scale = (peak < 0.0 ? -1.0 : 1.0) / nrm;
        for (double& v : mode.values()) v *= scale;
        basis.modes.push_back(std::move(mode));
    }
    return basis;
}

DenseVector project(const ScalarField& field, const PodBasis& basis) {
    DenseVector c(basis.retained());
    for (std::size_t k = 0; k < basis.retained(); ++k)
        c[k] = l2_inner(field, basis.modes[k]);
    return c;
}

ScalarField reconstruct(const DenseVector& coeffs, const PodBasis& basis) {
    if (coeffs.size() != basis.retained())
        throw std::invalid_argument("reconstruct: coefficient count mismatch");
    if (basis.modes.empty()) throw std::invalid_argument("reconstruct: empty basis");
    ScalarField out(basis.modes.front().grid_ptr(), basis.variable);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const auto& src = basis.modes[k].values();
        auto& dst = out.values();
        for (std::size_t m = 0; m < dst.size(); ++m) dst[m] += coeffs[k] * src[m];
    }
    return out;
}

std::size_t snapshot_rank(const DenseVector& eigenvalues) {
    if (eigenvalues.empty() || eigenvalues[0] <= 0.0) return 0;
    std::size_t r = 0;
    while (r < eigenvalues.size() && eigenvalues[r] > 1e-12 * eigenvalues[0]) ++r;
    return r;
}

}  // namespace sfv
