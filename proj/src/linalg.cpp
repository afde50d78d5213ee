#include "lancom/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace lancom {

namespace blas {

double dot(int n, const double* x, const double* y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double nrm2(int n, const double* x) { return std::sqrt(dot(n, x, x)); }

void axpy(int n, double a, const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(int n, double a, double* x) {
    for (int i = 0; i < n; ++i) x[i] *= a;
}

void gemv_t(const Matrix& m, const double* x, double* y) {
    for (int j = 0; j < m.cols(); ++j) y[j] = dot(m.rows(), m.col(j), x);
}

void gemv_n_acc(const Matrix& m, const double* x, double* y) {
    for (int j = 0; j < m.cols(); ++j) axpy(m.rows(), x[j], m.col(j), y);
}

Matrix gemm(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("gemm: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (int j = 0; j < b.cols(); ++j)
        for (int l = 0; l < a.cols(); ++l) axpy(a.rows(), b(l, j), a.col(l), c.col(j));
    return c;
}

}  // namespace blas

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, operating
// on the full column-major array z in place. With accumulate set, z ends up
// holding the orthogonal transformation; d and e receive the diagonal and
// subdiagonal (e[0] = 0).
void householder_tridiag(std::vector<double>& z, int n, Vector& d, Vector& e, bool accumulate) {
    auto zz = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(j) * n + i]; };

    for (int i = n - 1; i > 0; --i) {
        int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(zz(i, k));
            if (scale == 0.0) {
                e[i] = zz(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    zz(i, k) /= scale;
                    h += zz(i, k) * zz(i, k);
                }
                double f = zz(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                zz(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    zz(j, i) = zz(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += zz(j, k) * zz(i, k);
                    for (int k = j + 1; k <= l; ++k) g += zz(k, j) * zz(i, k);
                    e[j] = g / h;
                    f += e[j] * zz(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = zz(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k) zz(j, k) -= f * e[k] + g * zz(i, k);
                }
            }
        } else {
            e[i] = zz(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    if (accumulate) {
        for (int i = 0; i < n; ++i) {
            int l = i - 1;
            if (d[i] != 0.0) {
                for (int j = 0; j <= l; ++j) {
                    double g = 0.0;
                    for (int k = 0; k <= l; ++k) g += zz(i, k) * zz(k, j);
                    for (int k = 0; k <= l; ++k) zz(k, j) -= g * zz(k, i);
                }
            }
            d[i] = zz(i, i);
            zz(i, i) = 1.0;
            for (int j = 0; j <= l; ++j) zz(j, i) = zz(i, j) = 0.0;
        }
    } else {
        for (int i = 0; i < n; ++i) d[i] = zz(i, i);
    }
}

// Implicit-shift QL iteration on a tridiagonal matrix (d diagonal, e
// subdiagonal with e[0] unused on entry). When z is non-null its columns are
// rotated along, so that on exit they hold eigenvectors of the original
// matrix. Throws after 30 sweeps for any single eigenvalue.
void ql_implicit(Vector& d, Vector& e, int n, std::vector<double>* z) {
    auto zz = [&](int i, int j) -> double& { return (*z)[static_cast<std::size_t>(j) * n + i]; };

    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
            }
            if (m != l) {
                if (iter++ == 30)
                    throw std::runtime_error("ql_implicit: no convergence in 30 sweeps");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        for (int k = 0; k < n; ++k) {
                            f = zz(k, i + 1);
                            zz(k, i + 1) = s * zz(k, i) + c * f;
                            zz(k, i) = c * zz(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t x = (s += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// LU factorization of T - sigma*I with partial pivoting, one superdiagonal
// of fill-in. Near-singular pivots are replaced by a tiny value so that
// inverse iteration can proceed.
struct ShiftedTridiagLU {
    Vector dl, dd, du, du2;
    std::vector<int> swapped;
    int n;

    ShiftedTridiagLU(const SymTridiagonal& t, double sigma) {
        n = t.order();
        dl.assign(n, 0.0);
        dd.assign(n, 0.0);
        du.assign(n, 0.0);
        du2.assign(n, 0.0);
        swapped.assign(n, 0);
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
            dd[i] = t.diag[i] - sigma;
            scale = std::max(scale, std::abs(t.diag[i]));
        }
        for (int i = 0; i + 1 < n; ++i) {
            dl[i] = t.offdiag[i];
            du[i] = t.offdiag[i];
            scale = std::max(scale, std::abs(t.offdiag[i]));
        }
        const double tiny = std::max(scale, 1.0) * 1e-40;
        for (int i = 0; i + 1 < n; ++i) {
            if (std::abs(dd[i]) >= std::abs(dl[i])) {
                if (std::abs(dd[i]) < tiny) dd[i] = std::copysign(tiny, dd[i] == 0.0 ? 1.0 : dd[i]);
                double fact = dl[i] / dd[i];
                dl[i] = fact;
                dd[i + 1] -= fact * du[i];
            } else {
                double fact = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = fact;
                double tmp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = tmp - fact * dd[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        if (std::abs(dd[n - 1]) < tiny) dd[n - 1] = std::copysign(tiny, dd[n - 1] == 0.0 ? 1.0 : dd[n - 1]);
    }

    void solve(Vector& x) const {
        for (int i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                x[i + 1] -= dl[i] * x[i];
            } else {
                double tmp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = tmp - dl[i] * x[i];
            }
        }
        x[n - 1] /= dd[n - 1];
        if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
        for (int i = n - 3; i >= 0; --i) x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
    }
};

void normalize_or_reset(Vector& x, std::uint64_t& rng) {
    double nrm = blas::nrm2(static_cast<int>(x.size()), x.data());
    if (nrm == 0.0 || !std::isfinite(nrm)) {
        for (double& v : x) v = static_cast<double>(splitmix64(rng) >> 11) * 0x1.0p-53 - 0.5;
        nrm = blas::nrm2(static_cast<int>(x.size()), x.data());
    }
    blas::scal(static_cast<int>(x.size()), 1.0 / nrm, x.data());
}

EigenPairs sorted_pairs(Vector d, std::vector<double> z, int n) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    EigenPairs out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        const double* src = z.data() + static_cast<std::size_t>(order[j]) * n;
        std::copy(src, src + n, out.vectors.col(j));
    }
    return out;
}

// One classical Gram-Schmidt pass of p against the columns of q.
// Returns the norm of p afterwards.
double gs_pass(Vector& p, const Matrix& q, Vector& coeff) {
    coeff.resize(q.cols());
    blas::gemv_t(q, p.data(), coeff.data());
    for (int j = 0; j < q.cols(); ++j) blas::axpy(q.rows(), -coeff[j], q.col(j), p.data());
    return blas::nrm2(static_cast<int>(p.size()), p.data());
}

}  // namespace

EigenPairs sym_eig(const DenseSymmetric& a) {
    int n = a.order();
    if (n == 0) throw std::invalid_argument("sym_eig: empty matrix");
    std::vector<double> z(a.data(), a.data() + static_cast<std::size_t>(n) * n);
    Vector d(n), e(n);
    if (n == 1) {
        EigenPairs out;
        out.values = {a(0, 0)};
        out.vectors = Matrix(1, 1);
        out.vectors(0, 0) = 1.0;
        return out;
    }
    householder_tridiag(z, n, d, e, true);
    ql_implicit(d, e, n, &z);
    return sorted_pairs(std::move(d), std::move(z), n);
}

Vector sym_eigenvalues(const DenseSymmetric& a) {
    int n = a.order();
    if (n == 0) throw std::invalid_argument("sym_eigenvalues: empty matrix");
    if (n == 1) return {a(0, 0)};
    std::vector<double> z(a.data(), a.data() + static_cast<std::size_t>(n) * n);
    Vector d(n), e(n);
    householder_tridiag(z, n, d, e, false);
    ql_implicit(d, e, n, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

Vector tridiag_eigenvalues(const SymTridiagonal& t) {
    int n = t.order();
    if (n == 1) return {t.diag[0]};
    Vector d = t.diag;
    Vector e(n);
    e[0] = 0.0;
    for (int i = 1; i < n; ++i) e[i] = t.offdiag[i - 1];
    ql_implicit(d, e, n, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

EigenPairs tridiag_eig_smallest(const SymTridiagonal& t, int k) {
    int n = t.order();
    if (k < 1 || k > n) throw std::invalid_argument("tridiag_eig_smallest: k out of range");
    Vector all = tridiag_eigenvalues(t);
    EigenPairs out;
    out.values.assign(all.begin(), all.begin() + k);
    out.vectors = Matrix(n, k);
    if (n == 1) {
        out.vectors(0, 0) = 1.0;
        return out;
    }

    double scale = std::max(std::abs(all.front()), std::abs(all.back()));
    scale = std::max(scale, 1e-300);
    const double sep = 20.0 * DBL_EPSILON * scale;      // minimum spacing between shifts
    const double cluster_tol = 1000.0 * DBL_EPSILON * scale;

    std::uint64_t rng = 0x6c8e944d1f3a5b71ULL;
    Matrix accepted(n, 0);
    accepted.reserve_cols(k);
    Vector shifts(k);
    Vector x(n), coeff;
    for (int j = 0; j < k; ++j) {
        double sigma = all[j];
        if (j > 0 && sigma < shifts[j - 1] + sep) sigma = shifts[j - 1] + sep;
        shifts[j] = sigma;
        ShiftedTridiagLU lu(t, sigma);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(splitmix64(rng) >> 11) * 0x1.0p-53 - 0.5;
        normalize_or_reset(x, rng);
        for (int iter = 0; iter < 3; ++iter) {
            lu.solve(x);
            // project out earlier vectors of the same eigenvalue cluster
            for (int p = 0; p < j; ++p) {
                if (std::abs(all[p] - all[j]) <= cluster_tol) {
                    double c = blas::dot(n, accepted.col(p), x.data());
                    blas::axpy(n, -c, accepted.col(p), x.data());
                }
            }
            normalize_or_reset(x, rng);
        }
        accepted.append_col(x);
    }

    // final cleanup pass so the block is orthonormal to roundoff
    for (int j = 0; j < k; ++j) {
        double* v = accepted.col(j);
        for (int p = 0; p < j; ++p) {
            double c = blas::dot(n, accepted.col(p), v);
            blas::axpy(n, -c, accepted.col(p), v);
        }
        double nrm = blas::nrm2(n, v);
        blas::scal(n, 1.0 / nrm, v);
    }
    out.vectors = std::move(accepted);
    return out;
}

OrthoResult orthonormalize_against(const Vector& v, const Matrix& q, double breakdown_tol, int max_passes) {
    if (q.cols() > 0 && static_cast<int>(v.size()) != q.rows())
        throw std::invalid_argument("orthonormalize_against: length mismatch");
    OrthoResult res;
    res.passes = 0;
    double vnorm = blas::nrm2(static_cast<int>(v.size()), v.data());
    Vector p = v;
    Vector coeff;
    double cur = vnorm;
    double prev = vnorm;
    if (q.cols() > 0 && vnorm > 0.0) {
        do {
            cur = gs_pass(p, q, coeff);
            ++res.passes;
            if (cur >= prev * (1.0 / 1.4142135623730951) || res.passes >= max_passes) break;
            prev = cur;
        } while (true);
    }
    res.norm = cur;
    if (cur <= breakdown_tol * vnorm || vnorm == 0.0) {
        res.breakdown = true;
        return res;
    }
    res.breakdown = false;
    blas::scal(static_cast<int>(p.size()), 1.0 / cur, p.data());
    res.q = std::move(p);
    return res;
}

MergeResult merge_orthonormal(const Matrix& x) {
    double fro = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
        double c = blas::nrm2(x.rows(), x.col(j));
        fro += c * c;
    }
    fro = std::sqrt(fro);
    const double drop_tol = 1e-12 * fro;

    MergeResult res;
    res.basis = Matrix(x.rows(), 0);
    res.basis.reserve_cols(x.cols());
    res.dropped = 0;
    Vector p(x.rows()), coeff;
    for (int j = 0; j < x.cols(); ++j) {
        std::copy(x.col(j), x.col(j) + x.rows(), p.begin());
        double prev = blas::nrm2(x.rows(), p.data());
        double cur = prev;
        int passes = 0;
        while (res.basis.cols() > 0 && passes < 3) {
            cur = gs_pass(p, res.basis, coeff);
            ++passes;
            if (cur >= prev * (1.0 / 1.4142135623730951)) break;
            prev = cur;
        }
        if (cur < drop_tol) {
            ++res.dropped;
            continue;
        }
        blas::scal(x.rows(), 1.0 / cur, p.data());
        res.basis.append_col(p);
    }
    return res;
}

}  // namespace lancom
