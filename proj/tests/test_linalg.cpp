#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lancom/linalg.hpp"
#include "oracles.hpp"

using namespace lancom;

namespace {

DenseSymmetric diag_matrix(std::initializer_list<double> d) {
    DenseSymmetric s(static_cast<int>(d.size()));
    int i = 0;
    for (double v : d) {
        s.set(i, i, v);
        ++i;
    }
    return s;
}

}  // namespace

TEST_CASE("sym_eig identity") {
    DenseSymmetric a(5);
    for (int i = 0; i < 5; ++i) a.set(i, i, 1.0);
    EigenPairs p = sym_eig(a);
    for (int i = 0; i < 5; ++i) CHECK(p.values[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(oracle::orthonormality_defect(p.vectors) < 1e-13);
}

TEST_CASE("sym_eig diagonal") {
    EigenPairs p = sym_eig(diag_matrix({3.0, 1.0, 2.0}));
    CHECK(p.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.values[2] == doctest::Approx(3.0).epsilon(1e-14));
    // vectors are signed unit coordinate vectors
    CHECK(std::abs(p.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.vectors(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.vectors(0, 2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig 2x2") {
    DenseSymmetric a(2);
    a.set(0, 0, 2.0);
    a.set(1, 1, 2.0);
    a.set(0, 1, 1.0);
    EigenPairs p = sym_eig(a);
    CHECK(p.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.values[1] == doctest::Approx(3.0).epsilon(1e-14));
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p.vectors(0, 0) * p.vectors(1, 0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(p.vectors(0, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
}

TEST_CASE("sym_eig random matrices match oracle") {
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(trial * 59 / 99);
        DenseSymmetric a = oracle::random_symmetric(n, 1000 + trial);
        double an = oracle::frob_norm_sym(a);
        EigenPairs p = sym_eig(a);
        for (int i = 1; i < n; ++i) CHECK(p.values[i] >= p.values[i - 1]);
        CHECK(oracle::eig_residual(a, p) <= 1e-10 * an);
        CHECK(oracle::orthonormality_defect(p.vectors) <= 1e-12 * n);
        Vector ref = oracle::sym_eigenvalues(a);
        for (int i = 0; i < n; ++i) CHECK(std::abs(p.values[i] - ref[i]) <= 1e-12 * an);
        Vector vals_only = sym_eigenvalues(a);
        for (int i = 0; i < n; ++i) CHECK(std::abs(vals_only[i] - ref[i]) <= 1e-12 * an);
    }
}

TEST_CASE("tridiag smallest: 1-D Laplacian order 10") {
    Vector d(10, 2.0), e(9, -1.0);
    SymTridiagonal t(d, e);
    EigenPairs p = tridiag_eig_smallest(t, 1);
    double expected = 2.0 - 2.0 * std::cos(M_PI / 11.0);
    CHECK(p.values[0] == doctest::Approx(expected).epsilon(1e-12));
    // eigenvector is the discrete sine mode, compare up to sign
    double scale = 0.0;
    for (int i = 0; i < 10; ++i) scale += std::pow(std::sin(M_PI * (i + 1) / 11.0), 2);
    scale = std::sqrt(scale);
    double sign = p.vectors(0, 0) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 10; ++i)
        CHECK(sign * p.vectors(i, 0) == doctest::Approx(std::sin(M_PI * (i + 1) / 11.0) / scale).epsilon(1e-10));
}

TEST_CASE("tridiag smallest: decoupled diagonal blocks") {
    SymTridiagonal t(Vector{5.0, 1.0, 3.0}, Vector{0.0, 0.0});
    EigenPairs p = tridiag_eig_smallest(t, 2);
    CHECK(p.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.values[1] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(oracle::orthonormality_defect(p.vectors) < 1e-12);
}

TEST_CASE("tridiag smallest: 2x2") {
    SymTridiagonal t(Vector{2.0, 2.0}, Vector{1.0});
    EigenPairs p = tridiag_eig_smallest(t, 1);
    CHECK(p.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p.vectors(0, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(p.vectors(0, 0) * p.vectors(1, 0) < 0.0);
}

TEST_CASE("tridiag smallest agrees with dense embedding") {
    for (int trial = 0; trial < 12; ++trial) {
        int n = 5 + trial * 17;
        if (n > 200) n = 200;
        SymTridiagonal t = oracle::random_tridiagonal(n, 77 + trial);
        int k = 1 + trial % 5;
        if (k > n) k = n;
        EigenPairs mine = tridiag_eig_smallest(t, k);
        Vector dense = oracle::sym_eigenvalues(oracle::embed_tridiagonal(t));
        for (int i = 0; i < k; ++i) CHECK(std::abs(mine.values[i] - dense[i]) <= 1e-10);
        CHECK(oracle::orthonormality_defect(mine.vectors) <= 1e-12 * n);
        CHECK(oracle::eig_residual(oracle::embed_tridiagonal(t), mine) <= 1e-10 * (2.0 + oracle::frob_norm_sym(oracle::embed_tridiagonal(t))));
    }
}

TEST_CASE("orthonormalize_against: empty basis") {
    Matrix q(4, 0);
    Vector v{3.0, 0.0, 0.0, 4.0};
    OrthoResult r = orthonormalize_against(v, q);
    CHECK(!r.breakdown);
    CHECK(r.norm == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(r.q[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(r.q[3] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("orthonormalize_against: tiny orthogonal component recovered") {
    int n = 40;
    Matrix q(n, 1);
    for (int i = 0; i < n; ++i) q(i, 0) = 1.0 / std::sqrt(static_cast<double>(n));
    // u orthogonal to q1 by construction
    Vector u(n, 0.0);
    u[0] = 1.0 / std::sqrt(2.0);
    u[1] = -1.0 / std::sqrt(2.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = q(i, 0) + 1e-8 * u[i];
    OrthoResult r = orthonormalize_against(v, q);
    CHECK(!r.breakdown);
    CHECK(r.passes >= 2);
    CHECK(r.norm == doctest::Approx(1e-8).epsilon(1e-6));
    double align = std::abs(blas::dot(n, r.q.data(), u.data()));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(blas::dot(n, r.q.data(), q.col(0))) < 1e-13);
}

TEST_CASE("orthonormalize_against: vector inside the span breaks down") {
    int n = 30;
    Matrix q(n, 2);
    for (int i = 0; i < n; ++i) {
        q(i, 0) = (i == 0) ? 1.0 : 0.0;
        q(i, 1) = (i == 1) ? 1.0 : 0.0;
    }
    Vector v(n, 0.0);
    v[0] = 0.3;
    v[1] = -2.0;
    OrthoResult r = orthonormalize_against(v, q);
    CHECK(r.breakdown);
    Vector z(n, 0.0);
    CHECK(orthonormalize_against(z, q).breakdown);
}

TEST_CASE("merge_orthonormal drops duplicates") {
    Matrix x(3, 3);
    x(0, 0) = 1.0;
    x(0, 1) = 1.0;
    x(1, 2) = 1.0;
    MergeResult r = merge_orthonormal(x);
    CHECK(r.basis.cols() == 2);
    CHECK(r.dropped == 1);
    CHECK(oracle::orthonormality_defect(r.basis) < 1e-14);
}

TEST_CASE("merge_orthonormal preserves span and reports rank loss") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int n = 50, rank = 5, cols = 8;
    Matrix b(n, rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < n; ++i) b(i, j) = u(gen);
    Matrix c(rank, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rank; ++i) c(i, j) = u(gen);
    Matrix x = blas::gemm(b, c);
    MergeResult r = merge_orthonormal(x);
    CHECK(r.basis.cols() == rank);
    CHECK(r.dropped == cols - rank);
    CHECK(oracle::orthonormality_defect(r.basis) < 1e-12);
    // every original column reconstructs from the basis
    for (int j = 0; j < cols; ++j) {
        Vector col(x.col(j), x.col(j) + n);
        Vector coeff(r.basis.cols());
        blas::gemv_t(r.basis, col.data(), coeff.data());
        for (int l = 0; l < r.basis.cols(); ++l) blas::axpy(n, -coeff[l], r.basis.col(l), col.data());
        CHECK(blas::nrm2(n, col.data()) < 1e-10 * blas::nrm2(n, x.col(j)));
    }
}

TEST_CASE("merge_orthonormal keeps an already orthonormal block") {
    DenseSymmetric a = oracle::random_symmetric(20, 9);
    EigenPairs p = sym_eig(a);
    Matrix x(20, 6);
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 20; ++i) x(i, j) = p.vectors(i, j);
    MergeResult r = merge_orthonormal(x);
    CHECK(r.basis.cols() == 6);
    CHECK(r.dropped == 0);
    CHECK(oracle::orthonormality_defect(r.basis) < 1e-13);
}
