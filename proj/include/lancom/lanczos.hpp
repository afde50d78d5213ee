#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lancom/linalg.hpp"
#include "lancom/sparse.hpp"
#include "lancom/types.hpp"

namespace lancom {

// Standard normal vector from a fixed splitmix64 + Box-Muller pipeline.
// The draw sequence is part of the reproducibility contract: a given
// (n, seed) pair yields bit-identical output on a given platform.
Vector seeded_gaussian(int n, std::uint64_t seed);

// State of a Krylov-like decomposition A Q = Q T + q_next b^T + F.
// [Q, q_next] stays orthonormal, T = Q^T A Q up to rounding, and the
// factor F is never stored. alpha_hist/beta_hist accumulate the three-term
// coefficients of every expansion step across compressions, so they describe
// the tridiagonal an uncompressed run would have produced.
struct KrylovLikeState {
    Matrix Q;             // n x j, orthonormal columns
    DenseSymmetric T;     // j x j projected matrix, exactly symmetric
    Vector q_next;        // unit, orthogonal to Q; empty before the first step
    Vector alpha_hist;    // length == matvec_count
    Vector beta_hist;     // length == matvec_count; last entry couples q_next
    long matvec_count = 0;
    int compression_count = 0;
    bool breakdown = false;
    bool fill_in = true;      // diagnostic flag: tridiagonal-only T update when false
    double op_norm_scale = 0; // running max of ||A q||, sets the breakdown threshold

    int basis_size() const { return Q.cols(); }
};

struct RitzResult {
    Vector values;             // ascending
    Matrix vectors;            // n x |values|, orthonormal
    double residual_estimate = 0.0;
    long matvec_count = 0;
    bool converged = false;
};

struct Checkpoint {
    long matvecs = 0;
    Vector ritz;                       // k smallest Ritz values at this point
    double residual_estimate = 0.0;
    std::string event;                 // expand | compress | converged | breakdown | grow-m
    int ell = 0;                       // compress events: basis size after compression
    int k_hat = 0;                     // compress events: retained eigenvector count
    int p = 0;                         // compress events: filter half-degree (0 for eigenvector-only)
};

struct ConvergenceHistory {
    std::vector<Checkpoint> checkpoints;
};

struct SolverOptions {
    long max_matvecs = 200000;
    int max_basis_columns = 0;  // 0 means no cap beyond the matrix order
    bool fill_in = true;
    // Instrumentation hook, checked after every checkpoint; returning true
    // ends the run (converged reflects the residual test at that point).
    std::function<bool(const Checkpoint&)> stop_predicate;
};

struct SolveOutput {
    RitzResult result;
    ConvergenceHistory history;
    Vector alpha_hist;  // shadow three-term history at termination
    Vector beta_hist;
};

// Fresh state with q_1 a normalized seeded Gaussian vector; no steps taken.
KrylovLikeState init_state(const SparseMatrixCSR& a, std::uint64_t seed);

// One expansion step: w = A q_cur, projected column into T (full fill-in
// column when fill_in is set, coupling entry only otherwise), candidate
// orthogonalized against the whole basis with repeated passes, shadow
// alpha/beta appended from the first projection pass. Sets the breakdown
// flag instead of producing q_next when the candidate norm collapses.
void expand_step(KrylovLikeState& s, const SparseMatrixCSR& a);

// |beta_i| times the norm of the last row of the k lowest eigenvectors of
// the tridiagonal assembled from the full shadow history. Requires i >= k.
double estimate_residual(const Vector& alpha_hist, const Vector& beta_hist, int k);

// k smallest eigenpairs of T lifted through Q, residual estimate attached
// from the shadow history. Requires basis_size >= k.
RitzResult extract_ritz(const KrylovLikeState& s, int k);

// Spectral-norm residual ||A U - U diag(values)|| of a Ritz block.
double true_residual(const SparseMatrixCSR& a, const Matrix& vectors, const Vector& values);

// Lanczos with compression: expand to m columns, test the shadow residual,
// compress via the adaptive plan and continue; grows m by half on
// NoCompressionPossible. k >= 1, k < m <= n.
SolveOutput lc_solve(const SparseMatrixCSR& a, int k, int m, double tol_res, double tol_ra,
                     std::uint64_t seed, const SolverOptions& opt = {});

// Unrestarted Lanczos with full reorthogonalization, residual tested every step.
SolveOutput lanczos_solve(const SparseMatrixCSR& a, int k, double tol_res,
                          std::uint64_t seed, const SolverOptions& opt = {});

}  // namespace lancom
