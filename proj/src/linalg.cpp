#include "sfv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sfv {

void SparseMatrix::add(std::size_t row, std::size_t col, double value) {
    if (finalized_) throw std::logic_error("SparseMatrix::add after finalize");
    if (row >= n_ || col >= n_) throw std::out_of_range("SparseMatrix::add index");
    if (std::isnan(value)) throw std::invalid_argument("SparseMatrix::add NaN entry");
    coo_[{row, col}] += value;
}

void SparseMatrix::finalize() {
    if (finalized_) return;
    row_offsets_.assign(n_ + 1, 0);
    col_indices_.reserve(coo_.size());
    values_.reserve(coo_.size());
    for (const auto& [rc, v] : coo_) row_offsets_[rc.first + 1]++;
    for (std::size_t r = 0; r < n_; ++r) row_offsets_[r + 1] += row_offsets_[r];
    // std::map iterates in (row, col) order, so columns come out sorted per row.
    for (const auto& [rc, v] : coo_) {
        col_indices_.push_back(rc.second);
        values_.push_back(v);
    }
    coo_.clear();
    finalized_ = true;
}

void SparseMatrix::multiply(const DenseVector& x, DenseVector& y) const {
    if (!finalized_) throw std::logic_error("SparseMatrix::multiply before finalize");
    if (x.size() != n_) throw std::invalid_argument("SparseMatrix::multiply size mismatch");
    y.assign(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        double s = 0.0;
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
            s += values_[k] * x[col_indices_[k]];
        y[r] = s;
    }
}

DenseVector SparseMatrix::multiply(const DenseVector& x) const {
    DenseVector y;
    multiply(x, y);
    return y;
}

DenseVector SparseMatrix::diagonal() const {
    DenseVector d(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
            if (col_indices_[k] == r) d[r] = values_[k];
    return d;
}

bool SparseMatrix::is_symmetric(double tol) const {
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            std::size_t c = col_indices_[k];
            double v = values_[k];
            double vt = 0.0;
            for (std::size_t m = row_offsets_[c]; m < row_offsets_[c + 1]; ++m)
                if (col_indices_[m] == r) { vt = values_[m]; break; }
            if (std::abs(v - vt) > tol * std::max(1.0, std::abs(v))) return false;
        }
    }
    return true;
}

DenseVector DenseMatrix::multiply(const DenseVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::multiply size mismatch");
    DenseVector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += data_[i * cols_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double dot(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const DenseVector& v) { return std::sqrt(dot(v, v)); }

namespace {

DenseVector jacobi_precondition(const DenseVector& invdiag, const DenseVector& r) {
    DenseVector z(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = invdiag[i] * r[i];
    return z;
}

DenseVector inverse_diagonal(const SparseMatrix& A) {
    DenseVector d = A.diagonal();
    for (double& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;
    return d;
}

}  // namespace

IterativeResult cg_solve(const SparseMatrix& A, const DenseVector& b, double tol, int maxit,
                         const DenseVector* x0) {
    const std::size_t n = A.n();
    if (b.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
    if (maxit < 0) maxit = static_cast<int>(10 * n);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return {DenseVector(n, 0.0), 0, 0.0};

    DenseVector x = x0 ? *x0 : DenseVector(n, 0.0);
    DenseVector r = A.multiply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

    const DenseVector invdiag = inverse_diagonal(A);
    DenseVector z = jacobi_precondition(invdiag, r);
    DenseVector p = z;
    double rz = dot(r, z);
    double rnorm = norm2(r);

    for (int it = 0; it < maxit; ++it) {
        if (rnorm / bnorm <= tol) return {std::move(x), it, rnorm / bnorm};
        DenseVector Ap = A.multiply(p);
        double pAp = dot(p, Ap);
        if (pAp <= 0.0)
            throw IterativeFailure("cg_solve: matrix not positive definite", rnorm / bnorm, it);
        double alpha = rz / pAp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        z = jacobi_precondition(invdiag, r);
        double rz_new = dot(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rnorm = norm2(r);
    }
    if (rnorm / bnorm <= tol) return {std::move(x), maxit, rnorm / bnorm};
    throw IterativeFailure("cg_solve: no convergence", rnorm / bnorm, maxit);
}

IterativeResult bicgstab_solve(const SparseMatrix& A, const DenseVector& b, double tol, int maxit,
                               const DenseVector* x0) {
    const std::size_t n = A.n();
    if (b.size() != n) throw std::invalid_argument("bicgstab_solve: size mismatch");
    if (maxit < 0) maxit = static_cast<int>(10 * n);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return {DenseVector(n, 0.0), 0, 0.0};

    DenseVector x = x0 ? *x0 : DenseVector(n, 0.0);
    DenseVector r = A.multiply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    DenseVector rhat = r;

    const DenseVector invdiag = inverse_diagonal(A);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    DenseVector p(n, 0.0), v(n, 0.0);
    double rnorm = norm2(r);

    for (int it = 0; it < maxit; ++it) {
        if (rnorm / bnorm <= tol) return {std::move(x), it, rnorm / bnorm};
        double rho_new = dot(rhat, r);
        if (std::abs(rho_new) < 1e-300)
            throw IterativeFailure("bicgstab_solve: breakdown (rho ~ 0)", rnorm / bnorm, it);
        double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        DenseVector phat = jacobi_precondition(invdiag, p);
        v = A.multiply(phat);
        double rhat_v = dot(rhat, v);
        if (std::abs(rhat_v) < 1e-300)
            throw IterativeFailure("bicgstab_solve: breakdown (rhat.v ~ 0)", rnorm / bnorm, it);
        alpha = rho / rhat_v;
        DenseVector s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= tol) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
            return {std::move(x), it + 1, norm2(s) / bnorm};
        }
        DenseVector shat = jacobi_precondition(invdiag, s);
        DenseVector t = A.multiply(shat);
        double tt = dot(t, t);
        if (tt == 0.0)
            throw IterativeFailure("bicgstab_solve: breakdown (t = 0)", rnorm / bnorm, it);
        omega = dot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        rnorm = norm2(r);
        if (omega == 0.0)
            throw IterativeFailure("bicgstab_solve: breakdown (omega = 0)", rnorm / bnorm, it);
    }
    if (rnorm / bnorm <= tol) return {std::move(x), maxit, rnorm / bnorm};
    throw IterativeFailure("bicgstab_solve: no convergence", rnorm / bnorm, maxit);
}

EigenDecomposition sym_eig(const DenseMatrix& C) {
    const std::size_t n = C.rows();
    if (C.cols() != n) throw std::invalid_argument("sym_eig: matrix not square");

    double scale = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            scale = std::max(scale, std::abs(C(i, j)));
            asym = std::max(asym, std::abs(C(i, j) - C(j, i)));
        }
    if (scale > 0.0 && asym > 1e-8 * scale)
        throw std::invalid_argument("sym_eig: input not symmetric");

    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (C(i, j) + C(j, i));

    DenseMatrix q(n, n);
    for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(2.0 * off) <= 1e-14 * std::max(scale, 1e-300) * n) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                double apr = a(p, r);
                if (std::abs(apr) <= 1e-300) continue;
                double app = a(p, p), arr = a(r, r);
                double theta = 0.5 * (arr - app) / apr;
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = DenseMatrix(n, n);
    const double clip = 1e-14 * scale;
    for (std::size_t k = 0; k < n; ++k) {
        double lam = a(order[k], order[k]);
        if (lam < 0.0 && lam > -clip) lam = 0.0;
        out.eigenvalues[k] = lam;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = q(i, order[k]);
    }
    return out;
}

LuFactorization::LuFactorization(const DenseMatrix& A) : lu_(A), perm_(A.rows()) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("LuFactorization: matrix not square");
    std::iota(perm_.begin(), perm_.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                piv = i;
            }
        }
        if (best == 0.0) throw SingularMatrixError("lu: zero pivot at column " + std::to_string(k));
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu_(i, k) /= lu_(k, k);
            double lik = lu_(i, k);
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
        }
    }
}

DenseVector LuFactorization::solve(const DenseVector& b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw std::invalid_argument("LuFactorization::solve size mismatch");
    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

DenseVector lu_solve(const DenseMatrix& A, const DenseVector& b) {
    return LuFactorization(A).solve(b);
}

}  // namespace sfv
