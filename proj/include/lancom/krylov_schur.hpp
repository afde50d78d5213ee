#pragma once

#include "lancom/lanczos.hpp"

namespace lancom {

// Thick-restart state: the shared Krylov-like machinery where every restart
// replaces the basis by its ell lowest Ritz vectors, leaving T diagonal with
// a coupling column written by the next expansion step.
struct KsState {
    KrylovLikeState core;
    int restart_count = 0;
};

// Contract the basis to the ell lowest Ritz pairs of T. T becomes exactly
// diagonal; q_next is preserved. Requires ell < basis_size.
void ks_restart(KsState& s, int ell);

// Thick-restart driver: expand to m, test the restart residual, restart to
// ell, repeat. Requires k <= ell < m <= n.
SolveOutput ks_solve(const SparseMatrixCSR& a, int k, int m, int ell, double tol_res,
                     std::uint64_t seed, const SolverOptions& opt = {});

}  // namespace lancom
