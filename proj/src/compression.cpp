#include "lancom/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lancom {

namespace {

Matrix as_matrix(const DenseSymmetric& t) {
    int n = t.order();
    Matrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = t(i, j);
    return m;
}

Vector sym_apply(const DenseSymmetric& t, const Vector& x) {
    int n = t.order();
    Vector y(n, 0.0);
    const double* d = t.data();
    for (int j = 0; j < n; ++j) blas::axpy(n, x[j], d + static_cast<std::size_t>(j) * n, y.data());
    return y;
}

}  // namespace

Matrix rational_krylov_basis(const DenseSymmetric& t, const PoleList& poles, const Vector& start) {
    int n = t.order();
    if (static_cast<int>(start.size()) != n) throw std::invalid_argument("rational_krylov_basis: start vector size mismatch");
    if (poles.infinite_count < 0) throw std::invalid_argument("rational_krylov_basis: negative pole count");
    for (const PolePair& pp : poles.pairs)
        if (!(pp.imag > 0.0)) throw std::invalid_argument("rational_krylov_basis: pole pairs need positive imaginary part");
    double snorm = blas::nrm2(n, start.data());
    if (std::abs(snorm - 1.0) > 1e-8) throw std::invalid_argument("rational_krylov_basis: start vector must be unit");

    EigenPairs eig = sym_eig(t);
    double tnorm = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));

    Matrix basis;
    basis.set_rows(n);
    auto add = [&](const Vector& v) {
        OrthoResult o = orthonormalize_against(v, basis);
        if (!o.breakdown) basis.append_col(o.q);
    };

    Vector cur = start;
    for (int i = 0; i < poles.infinite_count; ++i) {
        if (i > 0) cur = sym_apply(t, cur);
        add(cur);
    }

    Vector proj(n);
    blas::gemv_t(eig.vectors, start.data(), proj.data());
    double collide = 1e-12 * tnorm;
    for (const PolePair& pp : poles.pairs) {
        double y = pp.imag;
        for (int attempt = 0;; ++attempt) {
            double dmin = std::numeric_limits<double>::infinity();
            for (double th : eig.values) {
                double dx = th - pp.real;
                dmin = std::min(dmin, dx * dx + y * y);
            }
            if (dmin > collide * collide) break;
            if (attempt > 0) throw std::runtime_error("rational_krylov_basis: pole collides with the spectrum");
            y += 1e-8 * tnorm;
        }
        // the shifted quadratic resolvent applied to start, solved spectrally
        Vector coef(n);
        for (int i = 0; i < n; ++i) {
            double dx = eig.values[i] - pp.real;
            coef[i] = proj[i] / (dx * dx + y * y);
        }
        Vector u(n, 0.0);
        blas::gemv_n_acc(eig.vectors, coef.data(), u.data());
        add(u);
        add(sym_apply(t, u));
    }
    return basis;
}

std::optional<CompressionPlan> plan_compression(const DenseSymmetric& t, int k, double tol_ra, int m) {
    if (t.order() != m) throw std::invalid_argument("plan_compression: projected matrix order must equal m");
    if (k < 1 || k >= m) throw std::invalid_argument("plan_compression: need 1 <= k < m");
    if (!(tol_ra > 0.0 && tol_ra < 1.0)) throw std::invalid_argument("plan_compression: tol_ra must lie in (0,1)");

    EigenPairs eig = sym_eig(t);
    const Vector& th = eig.values;
    double gap_floor = 1e-13 * std::max(1.0, std::abs(th[m - 1]));

    int best_khat = -1;
    int best_score = 0;
    double best_tau = 0.0, best_delta = 0.0, best_eta = 0.0;
    for (int khat = k; khat <= m - 1; ++khat) {
        double gap = th[khat] - th[k - 1];
        if (gap <= gap_floor) continue;
        double tau = 0.5 * (th[k - 1] + th[khat]);
        double delta = 0.5 * gap;
        double eta = th[m - 1] - tau;
        int d = required_degree(tol_ra, delta, eta);
        if (d > 200) continue;
        if (best_khat < 0 || khat + d < best_score) {
            best_khat = khat;
            best_score = khat + d;
            best_tau = tau;
            best_delta = delta;
            best_eta = eta;
        }
    }
    if (best_khat < 0) return std::nullopt;

    ZolotarevFilter filter = build_filter(best_tau, best_delta, best_eta, tol_ra);
    PoleList poles;
    poles.infinite_count = 2;
    poles.pairs = filter.finite_poles;
    Vector em(m, 0.0);
    em[m - 1] = 1.0;
    Matrix rational = rational_krylov_basis(t, poles, em);
    int rdim = rational.cols();

    Matrix cat(m, best_khat + rdim);
    for (int c = 0; c < best_khat; ++c)
        for (int i = 0; i < m; ++i) cat(i, c) = eig.vectors(i, c);
    for (int c = 0; c < rdim; ++c)
        for (int i = 0; i < m; ++i) cat(i, best_khat + c) = rational(i, c);
    MergeResult merged = merge_orthonormal(cat);
    int ell = merged.basis.cols();
    if (ell >= m) return std::nullopt;

    CompressionPlan plan;
    plan.k_star = best_khat;
    plan.filter = std::move(filter);
    plan.V = std::move(merged.basis);
    plan.ell = ell;
    plan.rational_dim = rdim;
    return plan;
}

void apply_compression(KrylovLikeState& s, const CompressionPlan& plan) {
    int m = s.basis_size();
    if (s.T.order() != m) throw std::logic_error("apply_compression: no steps taken yet");
    if (plan.V.rows() != m || plan.V.cols() != plan.ell) throw std::invalid_argument("apply_compression: plan shape mismatch");
    if (plan.ell < 1 || plan.ell > m) throw std::invalid_argument("apply_compression: bad target dimension");

    s.Q = blas::gemm(s.Q, plan.V);
    Matrix tv = blas::gemm(as_matrix(s.T), plan.V);
    Matrix small(plan.ell, plan.ell);
    for (int c = 0; c < plan.ell; ++c)
        for (int r = 0; r < plan.ell; ++r) small(r, c) = blas::dot(m, plan.V.col(r), tv.col(c));
    s.T = DenseSymmetric::from_dense(small);
    ++s.compression_count;
}

}  // namespace lancom
