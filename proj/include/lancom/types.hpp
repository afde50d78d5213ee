#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lancom {

using Vector = std::vector<double>;

// Dense column-major matrix. Columns can be appended up to the reserved
// capacity without moving previously stored data.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double* col(int j) { return data_.data() + static_cast<std::size_t>(j) * rows_; }
    const double* col(int j) const { return data_.data() + static_cast<std::size_t>(j) * rows_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * rows_ + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * rows_ + i]; }

    void reserve_cols(int cap) { data_.reserve(static_cast<std::size_t>(rows_) * cap); }

    void append_col(const double* v) {
        data_.insert(data_.end(), v, v + rows_);
        ++cols_;
    }
    void append_col(const Vector& v) {
        if (static_cast<int>(v.size()) != rows_) throw std::invalid_argument("append_col: length mismatch");
        append_col(v.data());
    }

    void set_rows(int rows) {
        if (cols_ != 0) throw std::logic_error("set_rows on nonempty matrix");
        rows_ = rows;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Symmetric dense matrix with full storage. entries(i,j) == entries(j,i)
// holds exactly; the constructor symmetrizes whatever it is given.
class DenseSymmetric {
public:
    DenseSymmetric() = default;
    explicit DenseSymmetric(int order) : order_(order), a_(static_cast<std::size_t>(order) * order, 0.0) {
        if (order < 0) throw std::invalid_argument("DenseSymmetric: negative order");
    }
    static DenseSymmetric from_dense(const Matrix& m) {
        if (m.rows() != m.cols()) throw std::invalid_argument("DenseSymmetric: matrix not square");
        DenseSymmetric s(m.rows());
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i <= j; ++i) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        return s;
    }

    int order() const { return order_; }

    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(j) * order_ + i]; }

    // Writes both (i,j) and (j,i).
    void set(int i, int j, double v) {
        a_[static_cast<std::size_t>(j) * order_ + i] = v;
        a_[static_cast<std::size_t>(i) * order_ + j] = v;
    }

    const double* data() const { return a_.data(); }

private:
    int order_ = 0;
    std::vector<double> a_;
};

// diag has length n, offdiag length n-1.
struct SymTridiagonal {
    Vector diag;
    Vector offdiag;

    SymTridiagonal() = default;
    SymTridiagonal(Vector d, Vector e) : diag(std::move(d)), offdiag(std::move(e)) {
        if (diag.empty()) throw std::invalid_argument("SymTridiagonal: empty diagonal");
        if (offdiag.size() + 1 != diag.size())
            throw std::invalid_argument("SymTridiagonal: offdiagonal length must be order-1");
    }
    int order() const { return static_cast<int>(diag.size()); }
};

// Eigenvalues ascending; vectors stored as columns in the same order.
struct EigenPairs {
    Vector values;
    Matrix vectors;
};

namespace blas {

double dot(int n, const double* x, const double* y);
double nrm2(int n, const double* x);
void axpy(int n, double a, const double* x, double* y);
void scal(int n, double a, double* x);

// y = M^T x  (y has cols(M) entries)
void gemv_t(const Matrix& m, const double* x, double* y);
// y += M x   (x has cols(M) entries)
void gemv_n_acc(const Matrix& m, const double* x, double* y);
// C = A B
Matrix gemm(const Matrix& a, const Matrix& b);

}  // namespace blas

}  // namespace lancom
