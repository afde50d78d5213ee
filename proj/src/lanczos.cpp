#include "lancom/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lancom/compression.hpp"

namespace lancom {

Vector seeded_gaussian(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("seeded_gaussian: n must be positive");
    Vector v(n);
    std::uint64_t state = seed;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    // each 64-bit draw maps into (0,1]; Box-Muller turns consecutive pairs
    // into independent standard normals
    auto uniform = [&next]() { return static_cast<double>((next() >> 11) + 1) * 0x1p-53; };
    for (int i = 0; i < n; i += 2) {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        v[i] = r * std::cos(a);
        if (i + 1 < n) v[i + 1] = r * std::sin(a);
    }
    return v;
}

KrylovLikeState init_state(const SparseMatrixCSR& a, std::uint64_t seed) {
    int n = a.order();
    if (n < 2) throw std::invalid_argument("init_state: order must be at least 2");
    KrylovLikeState s;
    Vector q = seeded_gaussian(n, seed);
    double nrm = blas::nrm2(n, q.data());
    blas::scal(n, 1.0 / nrm, q.data());
    s.Q.set_rows(n);
    s.Q.append_col(q);
    return s;
}

void expand_step(KrylovLikeState& s, const SparseMatrixCSR& a) {
    if (s.breakdown) throw std::logic_error("expand_step: state has broken down");
    int n = a.order();
    if (s.Q.rows() != n) throw std::invalid_argument("expand_step: operator order mismatch");
    bool first = s.q_next.empty();
    Vector qcur;
    if (first) {
        if (s.basis_size() != 1 || s.matvec_count != 0)
            throw std::logic_error("expand_step: missing q_next on a stepped state");
        qcur.assign(s.Q.col(0), s.Q.col(0) + n);
    } else {
        qcur = std::move(s.q_next);
        s.q_next.clear();
    }

    Vector w(n);
    a.apply(qcur.data(), w.data());
    ++s.matvec_count;
    double wn = blas::nrm2(n, w.data());
    s.op_norm_scale = std::max(s.op_norm_scale, wn);
    double alpha = blas::dot(n, qcur.data(), w.data());

    int jprev = first ? 0 : s.Q.cols();
    Vector tcol(jprev);
    if (jprev > 0) blas::gemv_t(s.Q, w.data(), tcol.data());

    // first full projection pass; its norm is the shadow beta
    Vector p = w;
    blas::axpy(n, -alpha, qcur.data(), p.data());
    if (jprev > 0) {
        Vector neg(jprev);
        for (int i = 0; i < jprev; ++i) neg[i] = -tcol[i];
        blas::gemv_n_acc(s.Q, neg.data(), p.data());
    }
    double beta = blas::nrm2(n, p.data());
    s.alpha_hist.push_back(alpha);
    s.beta_hist.push_back(beta);

    // grow the projected matrix, then the basis
    int jnew = jprev + 1;
    if (first) {
        s.T = DenseSymmetric(1);
        s.T.set(0, 0, alpha);
    } else {
        DenseSymmetric tn(jnew);
        for (int cj = 0; cj < jprev; ++cj)
            for (int ci = 0; ci <= cj; ++ci) tn.set(ci, cj, s.T(ci, cj));
        if (s.fill_in) {
            for (int i = 0; i < jprev; ++i) tn.set(i, jprev, tcol[i]);
        } else {
            // diagnostic mode: keep only the three-term coupling entry
            tn.set(jprev - 1, jprev, s.beta_hist[s.beta_hist.size() - 2]);
        }
        tn.set(jprev, jprev, alpha);
        s.T = std::move(tn);
        s.Q.append_col(qcur);
    }

    // repeated projection passes against the whole basis
    double prev = wn;
    double cur = beta;
    int passes = 1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    while (cur < prev * inv_sqrt2 && cur > 0.0 && passes < 3) {
        Vector coef(jnew);
        blas::gemv_t(s.Q, p.data(), coef.data());
        for (int i = 0; i < jnew; ++i) coef[i] = -coef[i];
        blas::gemv_n_acc(s.Q, coef.data(), p.data());
        prev = cur;
        cur = blas::nrm2(n, p.data());
        ++passes;
    }

    if (cur <= 1e-14 * s.op_norm_scale) {
        s.breakdown = true;
        return;
    }
    blas::scal(n, 1.0 / cur, p.data());
    s.q_next = std::move(p);
}

double estimate_residual(const Vector& alpha_hist, const Vector& beta_hist, int k) {
    int i = static_cast<int>(alpha_hist.size());
    if (static_cast<int>(beta_hist.size()) != i) throw std::invalid_argument("estimate_residual: history length mismatch");
    if (k < 1 || k > i) throw std::invalid_argument("estimate_residual: need 1 <= k <= history length");
    if (i == 1) return std::abs(beta_hist[0]);
    SymTridiagonal t(alpha_hist, Vector(beta_hist.begin(), beta_hist.end() - 1));
    EigenPairs w = tridiag_eig_smallest(t, k);
    double last = 0.0;
    for (int c = 0; c < k; ++c) last += w.vectors(i - 1, c) * w.vectors(i - 1, c);
    return std::abs(beta_hist.back()) * std::sqrt(last);
}

RitzResult extract_ritz(const KrylovLikeState& s, int k) {
    int j = s.basis_size();
    if (k < 1 || k > j) throw std::invalid_argument("extract_ritz: need 1 <= k <= basis size");
    if (s.T.order() != j) throw std::logic_error("extract_ritz: no steps taken yet");
    EigenPairs e = sym_eig(s.T);
    RitzResult r;
    r.values.assign(e.values.begin(), e.values.begin() + k);
    Matrix sk(j, k);
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < j; ++i) sk(i, c) = e.vectors(i, c);
    r.vectors = blas::gemm(s.Q, sk);
    r.matvec_count = s.matvec_count;
    int k_eff = std::min<long>(k, s.matvec_count);
    r.residual_estimate = estimate_residual(s.alpha_hist, s.beta_hist, k_eff);
    return r;
}

double true_residual(const SparseMatrixCSR& a, const Matrix& vectors, const Vector& values) {
    int n = vectors.rows();
    int k = vectors.cols();
    if (static_cast<int>(values.size()) != k) throw std::invalid_argument("true_residual: size mismatch");
    if (k == 0) return 0.0;
    Matrix resid(n, k);
    for (int c = 0; c < k; ++c) {
        a.apply(vectors.col(c), resid.col(c));
        blas::axpy(n, -values[c], vectors.col(c), resid.col(c));
    }
    DenseSymmetric gram(k);
    for (int cj = 0; cj < k; ++cj)
        for (int ci = 0; ci <= cj; ++ci)
            gram.set(ci, cj, blas::dot(n, resid.col(ci), resid.col(cj)));
    Vector ev = sym_eigenvalues(gram);
    return std::sqrt(std::max(0.0, ev.back()));
}

namespace {

Vector smallest_ritz_of(const DenseSymmetric& t, int k) {
    Vector all = sym_eigenvalues(t);
    return Vector(all.begin(), all.begin() + std::min<std::size_t>(k, all.size()));
}

void validate_tols(double tol_res, double tol_ra, bool with_ra) {
    if (!(tol_res > 0.0 && tol_res < 1.0)) throw std::invalid_argument("solver: tol_res must lie in (0,1)");
    if (with_ra && !(tol_ra > 0.0 && tol_ra < 1.0)) throw std::invalid_argument("solver: tol_ra must lie in (0,1)");
}

}  // namespace

SolveOutput lc_solve(const SparseMatrixCSR& a, int k, int m, double tol_res, double tol_ra,
                     std::uint64_t seed, const SolverOptions& opt) {
    int n = a.order();
    if (k < 1 || k >= m || m > n) throw std::invalid_argument("lc_solve: need 1 <= k < m <= n");
    validate_tols(tol_res, tol_ra, true);
    int hard_cap = n;
    if (opt.max_basis_columns > 0) hard_cap = std::min(hard_cap, opt.max_basis_columns);
    if (m > hard_cap) throw std::invalid_argument("lc_solve: m exceeds the basis column budget");

    KrylovLikeState s = init_state(a, seed);
    s.fill_in = opt.fill_in;
    int m_cur = m;
    SolveOutput out;
    bool converged = false;
    while (true) {
        if (s.matvec_count >= opt.max_matvecs) break;
        expand_step(s, a);
        long i = s.matvec_count;
        int k_eff = static_cast<int>(std::min<long>(k, i));
        Checkpoint cp;
        cp.matvecs = i;
        cp.ritz = smallest_ritz_of(s.T, k_eff);
        cp.residual_estimate = estimate_residual(s.alpha_hist, s.beta_hist, k_eff);
        cp.event = "expand";

        std::optional<CompressionPlan> plan;
        bool stuck = false;
        if (s.breakdown) {
            cp.event = "breakdown";
        } else if (s.basis_size() == m_cur) {
            if (k_eff == k && cp.residual_estimate <= tol_res) {
                cp.event = "converged";
            } else {
                plan = plan_compression(s.T, k, tol_ra, m_cur);
                if (plan) {
                    cp.event = "compress";
                    cp.ell = plan->ell;
                    cp.k_hat = plan->k_star;
                    cp.p = plan->filter.p;
                } else {
                    int grown = std::min(m_cur + m_cur / 2, hard_cap);
                    if (grown > m_cur) {
                        m_cur = grown;
                        cp.event = "grow-m";
                    } else {
                        stuck = true;
                    }
                }
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
        if (stuck) break;
        if (plan) apply_compression(s, *plan);
    }
    out.result = extract_ritz(s, std::min(k, s.basis_size()));
    out.result.converged = converged;
    out.alpha_hist = std::move(s.alpha_hist);
    out.beta_hist = std::move(s.beta_hist);
    return out;
}

SolveOutput lanczos_solve(const SparseMatrixCSR& a, int k, double tol_res,
                          std::uint64_t seed, const SolverOptions& opt) {
    int n = a.order();
    if (k < 1 || k >= n) throw std::invalid_argument("lanczos_solve: need 1 <= k < n");
    validate_tols(tol_res, 0.5, false);
    int hard_cap = n;
    if (opt.max_basis_columns > 0) hard_cap = std::min(hard_cap, opt.max_basis_columns);

    KrylovLikeState s = init_state(a, seed);
    s.fill_in = opt.fill_in;
    SolveOutput out;
    bool converged = false;
    while (true) {
        if (s.matvec_count >= opt.max_matvecs) break;
        expand_step(s, a);
        long i = s.matvec_count;
        int k_eff = static_cast<int>(std::min<long>(k, i));
        Checkpoint cp;
        cp.matvecs = i;
        cp.event = "expand";
        // the projected matrix never leaves tridiagonal form here, so the
        // shadow history supplies both the Ritz values and the residual
        if (i == 1) {
            cp.ritz = {s.alpha_hist[0]};
            cp.residual_estimate = std::abs(s.beta_hist[0]);
        } else {
            SymTridiagonal t(s.alpha_hist, Vector(s.beta_hist.begin(), s.beta_hist.end() - 1));
            EigenPairs w = tridiag_eig_smallest(t, k_eff);
            cp.ritz = w.values;
            double last = 0.0;
            for (int c = 0; c < k_eff; ++c) last += w.vectors(i - 1, c) * w.vectors(i - 1, c);
            cp.residual_estimate = std::abs(s.beta_hist.back()) * std::sqrt(last);
        }
        if (s.breakdown) cp.event = "breakdown";
        else if (k_eff == k && cp.residual_estimate <= tol_res) cp.event = "converged";
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
        if (s.basis_size() >= hard_cap) break;
    }
    out.result = extract_ritz(s, std::min(k, s.basis_size()));
    out.result.converged = converged;
    out.alpha_hist = std::move(s.alpha_hist);
    out.beta_hist = std::move(s.beta_hist);
    return out;
}

}  // namespace lancom
