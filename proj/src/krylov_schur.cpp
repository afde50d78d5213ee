#include "lancom/krylov_schur.hpp"

#include <algorithm>
#include <cmath>

namespace lancom {

void ks_restart(KsState& ks, int ell) {
    KrylovLikeState& s = ks.core;
    int j = s.basis_size();
    if (ell < 1 || ell >= j) throw std::invalid_argument("ks_restart: need 1 <= ell < basis size");
    if (s.T.order() != j) throw std::logic_error("ks_restart: no steps taken yet");
    if (s.breakdown || s.q_next.empty()) throw std::logic_error("ks_restart: state cannot continue");

    EigenPairs e = sym_eig(s.T);
    Matrix v(j, ell);
    for (int c = 0; c < ell; ++c)
        for (int i = 0; i < j; ++i) v(i, c) = e.vectors(i, c);
    s.Q = blas::gemm(s.Q, v);
    // the retained block is exactly diagonal in the rotated coordinates
    DenseSymmetric tn(ell);
    for (int c = 0; c < ell; ++c) tn.set(c, c, e.values[c]);
    s.T = std::move(tn);
    ++s.compression_count;
    ++ks.restart_count;
}

SolveOutput ks_solve(const SparseMatrixCSR& a, int k, int m, int ell, double tol_res,
                     std::uint64_t seed, const SolverOptions& opt) {
    int n = a.order();
    if (k < 1 || k > ell || ell >= m || m > n) throw std::invalid_argument("ks_solve: need 1 <= k <= ell < m <= n");
    if (!(tol_res > 0.0 && tol_res < 1.0)) throw std::invalid_argument("ks_solve: tol_res must lie in (0,1)");
    int hard_cap = n;
    if (opt.max_basis_columns > 0) hard_cap = std::min(hard_cap, opt.max_basis_columns);
    if (m > hard_cap) throw std::invalid_argument("ks_solve: m exceeds the basis column budget");

    KsState ks;
    ks.core = init_state(a, seed);
    KrylovLikeState& s = ks.core;
    SolveOutput out;
    bool converged = false;
    while (true) {
        if (s.matvec_count >= opt.max_matvecs) break;
        expand_step(s, a);
        long i = s.matvec_count;
        int j = s.basis_size();
        int k_eff = static_cast<int>(std::min<long>(k, i));
        EigenPairs e = sym_eig(s.T);
        Checkpoint cp;
        cp.matvecs = i;
        cp.ritz.assign(e.values.begin(), e.values.begin() + k_eff);
        double last = 0.0;
        for (int c = 0; c < k_eff; ++c) last += e.vectors(j - 1, c) * e.vectors(j - 1, c);
        cp.residual_estimate = std::abs(s.beta_hist.back()) * std::sqrt(last);
        cp.event = "expand";
        // convergence is decided at the restart boundary only, matching the
        // compression solver's cadence
        if (s.breakdown) {
            cp.event = "breakdown";
        } else if (j == m) {
            if (k_eff == k && cp.residual_estimate <= tol_res) {
                cp.event = "converged";
            } else {
                cp.event = "compress";
                cp.ell = ell;
                cp.k_hat = ell;
                cp.p = 0;
            }
        }
        out.history.checkpoints.push_back(cp);
        if (cp.event == "converged") {
            converged = true;
            break;
        }
        if (s.breakdown) {
            converged = k_eff == k && cp.residual_estimate <= tol_res;
            break;
        }
        if (opt.stop_predicate && opt.stop_predicate(cp)) {
            converged = k_eff == k && cp.residual_estimate <= tol_res;
            break;
        }
        if (cp.event == "compress") ks_restart(ks, ell);
    }
    out.result = extract_ritz(s, std::min(k, s.basis_size()));
    out.result.converged = converged;
    if (!out.history.checkpoints.empty())
        out.result.residual_estimate = out.history.checkpoints.back().residual_estimate;
    out.alpha_hist = std::move(s.alpha_hist);
    out.beta_hist = std::move(s.beta_hist);
    return out;
}

}  // namespace lancom
