#pragma once

#include "sfv/grid.hpp"
#include "sfv/linalg.hpp"

#include <optional>

namespace sfv {

// Ordered snapshot collection for one variable, parameter-major / time-minor.
struct Snapshot {
    ScalarField field;
    std::vector<double> parameters;
    double time;
};

class SnapshotSet {
public:
    explicit SnapshotSet(FieldTag variable = FieldTag::Generic) : variable_(variable) {}

    FieldTag variable() const { return variable_; }
    std::size_t count() const { return snapshots_.size(); }
    bool empty() const { return snapshots_.empty(); }

    void add(ScalarField field, std::vector<double> parameters, double time);
    void append(const SnapshotSet& other);

    const Snapshot& at(std::size_t k) const { return snapshots_.at(k); }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    GridPtr grid_ptr() const;

private:
    FieldTag variable_;
    std::vector<Snapshot> snapshots_;
};

struct EmptyBasisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Orthonormal POD modes with their eigenvalue spectrum.
struct PodBasis {
    std::vector<ScalarField> modes;  // retained, unit L2 norm
    DenseVector eigenvalues;         // full spectrum, descending
    std::size_t retained() const { return modes.size(); }
    double threshold = 0.0;          // 0 when a fixed count was requested
    FieldTag variable = FieldTag::Generic;
};

// Method-of-snapshots correlation matrix C_ij = (Phi_i, Phi_j)_{L2}.
DenseMatrix correlation_matrix(const SnapshotSet& snapshots);

// Eigendecompose the correlation matrix and build modes zeta_k =
// (1/sqrt(lambda_k)) sum_j Q_jk Phi_j, renormalized in L2. Retains modes with
// lambda_k / sum(lambda) >= threshold, or exactly fixed_count modes.
// Each mode's sign is fixed so its largest-magnitude entry is positive.
PodBasis build_basis(const SnapshotSet& snapshots, double threshold,
                     std::optional<std::size_t> fixed_count = std::nullopt);

// Galerkin coefficients c_k = (field, zeta_k)_{L2}.
DenseVector project(const ScalarField& field, const PodBasis& basis);

// sum_k c_k zeta_k.
ScalarField reconstruct(const DenseVector& coeffs, const PodBasis& basis);

// Numerical rank of the snapshot set: eigenvalues above 1e-12 * lambda_1.
std::size_t snapshot_rank(const DenseVector& eigenvalues);

}  // namespace sfv
