#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace liprox {

/// Dot product of two equally sized vectors.
inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Euclidean norm.
inline double norm2(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

/// Squared Euclidean norm.
inline double norm2_sq(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

/// L1 norm.
inline double norm1(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
}

/// Max-magnitude norm.
inline double norm_inf(const std::vector<double>& a)
{
    double s = 0.0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

/// Result of a power-iteration spectral norm estimate.
struct SpectralNorm {
    double value = 0.0;   ///< largest eigenvalue of (1/n) X^T X
    bool converged = false;
    std::size_t n_iter = 0;
};

/// Immutable dense row-major matrix.
///
/// Values are fixed at construction; column norms are computed eagerly so the
/// accessor is O(1) and never stale.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values))
    {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("DenseMatrix: expected " + std::to_string(rows_ * cols_) +
                                        " values, got " + std::to_string(data_.size()));
        for (double v : data_)
            if (!std::isfinite(v))
                throw std::invalid_argument("DenseMatrix: non-finite entry");
        compute_col_norms();
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    /// Pointer to the start of row i.
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    /// Euclidean norms of the columns, computed once at construction.
    const std::vector<double>& col_norms() const { return col_norms_; }

private:
    void compute_col_norms()
    {
        col_norms_.assign(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* r = row(i);
            for (std::size_t j = 0; j < cols_; ++j) col_norms_[j] += r[j] * r[j];
        }
        for (double& v : col_norms_) v = std::sqrt(v);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
    std::vector<double> col_norms_;
};

/// y = X v.
inline std::vector<double> matvec(const DenseMatrix& X, const std::vector<double>& v)
{
    if (v.size() != X.cols())
        throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(X.rows(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* r = X.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < X.cols(); ++j) s += r[j] * v[j];
        y[i] = s;
    }
    return y;
}

/// y = X^T v.
inline std::vector<double> matvec_transpose(const DenseMatrix& X, const std::vector<double>& v)
{
    if (v.size() != X.rows())
        throw std::invalid_argument("matvec_transpose: dimension mismatch");
    std::vector<double> y(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* r = X.row(i);
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (std::size_t j = 0; j < X.cols(); ++j) y[j] += r[j] * vi;
    }
    return y;
}

/// Rescale every column to unit Euclidean norm.
/// Throws if some column is identically zero (its norm cannot be normalized).
inline DenseMatrix standardize_columns(const DenseMatrix& X)
{
    const auto& norms = X.col_norms();
    for (std::size_t j = 0; j < X.cols(); ++j)
        if (norms[j] == 0.0)
            throw std::invalid_argument("standardize_columns: column " + std::to_string(j) +
                                        " has zero norm");
    std::vector<double> scaled(X.data());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) scaled[i * X.cols() + j] /= norms[j];
    return DenseMatrix(X.rows(), X.cols(), std::move(scaled));
}

/// Extract the given columns (in the given order) into a new matrix.
inline DenseMatrix select_columns(const DenseMatrix& X, const std::vector<std::size_t>& idx)
{
    for (std::size_t j : idx)
        if (j >= X.cols())
            throw std::invalid_argument("select_columns: index out of range");
    std::vector<double> out(X.rows() * idx.size());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t k = 0; k < idx.size(); ++k) out[i * idx.size() + k] = X(i, idx[k]);
    return DenseMatrix(X.rows(), idx.size(), std::move(out));
}

/// Largest eigenvalue of (1/n) X^T X by power iteration.
///
/// Deterministic: starts from the normalized all-ones vector, iterates
/// v <- X^T X v / ||X^T X v|| until the Rayleigh quotient moves by less than
/// `tol` relatively, up to `max_iter` steps.
inline SpectralNorm spectral_norm_sq(const DenseMatrix& X, double tol = 1e-9,
                                     std::size_t max_iter = 2000)
{
    const std::size_t p = X.cols();
    const double n = static_cast<double>(X.rows());
    if (p == 0 || X.rows() == 0) return {0.0, true, 0};
    std::vector<double> v(p, 1.0 / std::sqrt(static_cast<double>(p)));
    double lambda = 0.0;
    SpectralNorm out;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        std::vector<double> w = matvec_transpose(X, matvec(X, v));
        const double wn = norm2(w);
        if (wn == 0.0) return {0.0, true, it};  // v in the null space of a rank-deficient X
        for (double& x : w) x /= wn;
        const double lambda_new = dot(w, matvec_transpose(X, matvec(X, w)));
        v = std::move(w);
        out.n_iter = it;
        if (it > 1 && std::abs(lambda_new - lambda) <= tol * std::max(1.0, std::abs(lambda_new))) {
            out.value = lambda_new / n;
            out.converged = true;
            return out;
        }
        lambda = lambda_new;
    }
    out.value = lambda / n;
    out.converged = false;
    return out;
}

/// Cholesky factor (lower triangular L with A = L L^T) of a symmetric
/// positive-definite matrix. Throws std::runtime_error if a pivot is not
/// strictly positive.
inline DenseMatrix cholesky(const DenseMatrix& A)
{
    if (A.rows() != A.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = A.rows();
    std::vector<double> L(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
        if (d <= 0.0) throw std::runtime_error("cholesky: matrix is not positive definite");
        L[j * n + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            L[i * n + j] = s / L[j * n + j];
        }
    }
    return DenseMatrix(n, n, std::move(L));
}

/// Solve A x = b for symmetric positive-definite A via Cholesky.
inline std::vector<double> solve_spd(const DenseMatrix& A, const std::vector<double>& b)
{
    const DenseMatrix L = cholesky(A);
    const std::size_t n = A.rows();
    if (b.size() != n) throw std::invalid_argument("solve_spd: dimension mismatch");
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * y[k];
        y[i] = s / L(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * x[k];
        x[ii] = s / L(ii, ii);
    }
    return x;
}

}  // namespace liprox
