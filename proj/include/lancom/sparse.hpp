#pragma once

#include <iosfwd>
#include <string>

#include "lancom/types.hpp"

namespace lancom {

struct Triplet {
    int row;
    int col;
    double value;
};

// Sparse symmetric matrix in compressed sparse row form. Construction
// validates structural and numerical symmetry (1e-15 relative) and that
// column indices are strictly increasing within each row.
class SparseMatrixCSR {
public:
    SparseMatrixCSR(int n, std::vector<int> row_ptr, std::vector<int> col_idx, Vector values);

    // Duplicate entries are summed. Both triangles may be given as long as
    // the result is symmetric.
    static SparseMatrixCSR from_triplets(int n, std::vector<Triplet> entries);

    int order() const { return n_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const Vector& values() const { return values_; }

    // y = A x
    void apply(const double* x, double* y) const;
    Vector apply(const Vector& x) const;

    // largest absolute entry, a cheap scale proxy
    double max_abs() const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    Vector values_;
};

Vector matvec(const SparseMatrixCSR& a, const Vector& x);

// Matrix Market exchange format, coordinate real, symmetric or general
// storage. General input must be numerically symmetric to 1e-12 relative or
// reading fails. Values are written with 17 significant digits so that a
// write/read/write cycle is byte identical.
SparseMatrixCSR read_matrix_market(std::istream& in);
SparseMatrixCSR read_matrix_market(const std::string& path);
void write_matrix_market(const SparseMatrixCSR& a, std::ostream& out);
void write_matrix_market(const SparseMatrixCSR& a, const std::string& path);

// Five-point Laplacian on an L-shaped domain: an nx-by-nx interior grid with
// the quadrant where both indices exceed nx/2 removed, points numbered
// column major, all values scaled by (3/4) nx^2. nx must be even and >= 2.
// The resulting order is 3 nx^2 / 4.
SparseMatrixCSR gen_laplacian_L(int nx);

}  // namespace lancom
