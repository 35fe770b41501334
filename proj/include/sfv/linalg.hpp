#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfv {

using DenseVector = std::vector<double>;

// Thrown when an iterative solve fails to reach the requested tolerance.
struct IterativeFailure : std::runtime_error {
    IterativeFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), final_residual(residual), iterations(iterations) {}
    double final_residual;
    int iterations;
};

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Square sparse matrix in CSR form.
class SparseMatrix {
public:
    explicit SparseMatrix(std::size_t n) : n_(n) {}

    std::size_t n() const { return n_; }

    // Assembly: accumulate entries, then finalize into CSR.
    void add(std::size_t row, std::size_t col, double value);
    void finalize();
    bool finalized() const { return finalized_; }

    void multiply(const DenseVector& x, DenseVector& y) const;
    DenseVector multiply(const DenseVector& x) const;
    DenseVector diagonal() const;
    bool is_symmetric(double tol = 1e-12) const;

    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::size_t>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t n_;
    bool finalized_ = false;
    std::map<std::pair<std::size_t, std::size_t>, double> coo_;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

class DenseMatrix {
public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    DenseVector multiply(const DenseVector& x) const;
    DenseMatrix transpose() const;
    double frobenius_norm() const;

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& v);

struct IterativeResult {
    DenseVector x;
    int iterations;
    double relative_residual;
};

// Jacobi-preconditioned CG for SPD systems. Optional warm start via x0.
IterativeResult cg_solve(const SparseMatrix& A, const DenseVector& b, double tol = 1e-8,
                         int maxit = -1, const DenseVector* x0 = nullptr);

// Jacobi-preconditioned BiCGStab for nonsingular systems.
IterativeResult bicgstab_solve(const SparseMatrix& A, const DenseVector& b, double tol = 1e-8,
                               int maxit = -1, const DenseVector* x0 = nullptr);

struct EigenDecomposition {
    DenseVector eigenvalues;   // descending, negatives below roundoff clipped to 0
    DenseMatrix eigenvectors;  // column k pairs with eigenvalues[k]
};

// Cyclic Jacobi rotations on the symmetrized input (C + C^T)/2.
// Rejects inputs that are non-symmetric beyond 1e-8 relative.
EigenDecomposition sym_eig(const DenseMatrix& C);

// Dense LU with partial pivoting.
DenseVector lu_solve(const DenseMatrix& A, const DenseVector& b);

// Factored form for repeated right-hand sides.
class LuFactorization {
public:
    explicit LuFactorization(const DenseMatrix& A);
    DenseVector solve(const DenseVector& b) const;

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

}  // namespace sfv
