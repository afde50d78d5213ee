#pragma once

#include "lancom/types.hpp"

namespace lancom {

// Full eigendecomposition of a symmetric matrix, values ascending.
// Householder reduction to tridiagonal form followed by implicit-shift QL
// with Wilkinson shifts. Throws if the QL iteration fails to converge
// within 30 sweeps per eigenvalue, which indicates a kernel bug.
EigenPairs sym_eig(const DenseSymmetric& a);

// Eigenvalues only, ascending.
Vector sym_eigenvalues(const DenseSymmetric& a);

// All eigenvalues of a symmetric tridiagonal matrix, ascending.
Vector tridiag_eigenvalues(const SymTridiagonal& t);

// k smallest eigenpairs of a symmetric tridiagonal matrix, values ascending,
// vectors orthonormal. 1 <= k <= order.
EigenPairs tridiag_eig_smallest(const SymTridiagonal& t, int k);

struct OrthoResult {
    Vector q;        // unit vector, empty on breakdown
    double norm;     // norm after projection, before normalization
    bool breakdown;  // projection removed essentially everything
    int passes;      // projection passes performed
};

// Projects v against the orthonormal columns of q (classical Gram-Schmidt),
// repeating the pass whenever the norm drops below 1/sqrt(2) of its value
// before the pass, at most max_passes in total. Breakdown when the final
// norm falls below breakdown_tol * ||v||.
OrthoResult orthonormalize_against(const Vector& v, const Matrix& q,
                                   double breakdown_tol = 1e-14, int max_passes = 3);

struct MergeResult {
    Matrix basis;
    int dropped;  // columns discarded as numerically dependent
};

// Orthonormal basis for the column span of x. Columns whose norm after
// projection falls below 1e-12 * ||x||_F are dropped.
MergeResult merge_orthonormal(const Matrix& x);

}  // namespace lancom
