#pragma once

#include <optional>
#include <vector>

#include "lancom/lanczos.hpp"
#include "lancom/types.hpp"
#include "lancom/zolotarev.hpp"

namespace lancom {

// Pole configuration of a rational Krylov subspace: a number of infinite
// poles (polynomial directions) plus finite conjugate pairs.
struct PoleList {
    int infinite_count = 0;
    std::vector<PolePair> pairs;

    int total() const { return infinite_count + 2 * static_cast<int>(pairs.size()); }
};

// Everything needed to compress an m-column state down to ell columns.
// V spans the retained eigenvector block plus the rational Krylov space of
// the filter poles; e_m lies in range(V) because the rational block starts
// from e_m itself.
struct CompressionPlan {
    int k_star;            // retained eigenvector count
    ZolotarevFilter filter;
    Matrix V;              // m x ell, orthonormal
    int ell;
    int rational_dim;      // rational block size after truncation
};

// Orthonormal basis of the rational Krylov subspace of T for the given poles
// and start vector. Conjugate pairs are handled in real arithmetic through
// the quadratic system (T - aI)^2 + y^2 I, solved spectrally; each pair
// contributes its solution u and T u. Near-dependent directions are dropped.
// A pole pair whose quadratic is singular to 1e-12 * ||T|| gets its imaginary
// part perturbed by 1e-8 * ||T|| once; a second collision throws.
Matrix rational_krylov_basis(const DenseSymmetric& t, const PoleList& poles, const Vector& start);

// Adaptive plan: over cut points k_hat in [k, m-1] with a workable Ritz gap,
// minimize k_hat + degree_bound (ties to the smaller k_hat), build the filter
// at tau = (theta_k + theta_{k_hat+1})/2 and the combined basis. Returns
// nothing when every gap is degenerate, every degree exceeds the cap, or the
// combined basis fails to shrink below m.
std::optional<CompressionPlan> plan_compression(const DenseSymmetric& t, int k, double tol_ra, int m);

// Q <- Q V, T <- V^T T V (symmetrized). q_next, histories, and matvec count
// are untouched; the compression counter advances.
void apply_compression(KrylovLikeState& s, const CompressionPlan& plan);

}  // namespace lancom
