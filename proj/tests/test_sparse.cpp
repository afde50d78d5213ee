#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lancom/sparse.hpp"
#include "oracles.hpp"

using namespace lancom;

namespace {

SparseMatrixCSR tridiag_stencil(int n) {
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i + 1 < n) {
            t.push_back({i, i + 1, -1.0});
            t.push_back({i + 1, i, -1.0});
        }
    }
    return SparseMatrixCSR::from_triplets(n, std::move(t));
}

DenseSymmetric to_dense(const SparseMatrixCSR& a) {
    DenseSymmetric d(a.order());
    for (int i = 0; i < a.order(); ++i)
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
            d.set(i, a.col_idx()[p], a.values()[p]);
    return d;
}

// independent generator for the retained-region Laplacian: assembles the dense
// operator directly from the stencil, with the same quadrant and numbering
DenseSymmetric dense_laplacian_L(int nx) {
    int half = nx / 2;
    auto retained = [&](int a, int b) { return a >= 1 && a <= nx && b >= 1 && b <= nx && !(a > half && b > half); };
    std::vector<std::pair<int, int>> pts;
    std::vector<int> id(static_cast<std::size_t>(nx) * nx, -1);
    for (int a = 1; a <= nx; ++a)
        for (int b = 1; b <= nx; ++b)
            if (retained(a, b)) {
                id[static_cast<std::size_t>(a - 1) * nx + (b - 1)] = static_cast<int>(pts.size());
                pts.push_back({a, b});
            }
    double s = 0.75 * nx * nx;
    DenseSymmetric d(static_cast<int>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto [a, b] = pts[i];
        d.set(static_cast<int>(i), static_cast<int>(i), 4.0 * s);
        const int nbr[4][2] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
        for (auto& nb : nbr)
            if (retained(nb[0], nb[1]))
                d.set(static_cast<int>(i), id[static_cast<std::size_t>(nb[0] - 1) * nx + (nb[1] - 1)], -s);
    }
    return d;
}

}  // namespace

TEST_CASE("matvec on the 1-D stencil") {
    SparseMatrixCSR a = tridiag_stencil(3);
    Vector y = a.apply(Vector{1.0, 1.0, 1.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(0.0));
    CHECK(y[2] == doctest::Approx(1.0));
    CHECK(matvec(a, Vector{1.0, 2.0, 3.0})[1] == doctest::Approx(0.0));
}

TEST_CASE("matvec agrees with dense multiply on random sparse matrices") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 5 + static_cast<int>(rng() % 96);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::vector<Triplet> t;
        for (int i = 0; i < n; ++i) t.push_back({i, i, val(rng) + 4.0});
        for (int e = 0; e < 3 * n; ++e) {
            int i = pick(rng), j = pick(rng);
            double v = val(rng);
            t.push_back({i, j, v});
            if (i != j) t.push_back({j, i, v});
        }
        SparseMatrixCSR a = SparseMatrixCSR::from_triplets(n, std::move(t));
        DenseSymmetric d = to_dense(a);
        Vector x(n);
        for (double& xi : x) xi = val(rng);
        Vector y = a.apply(x);
        double scale = a.max_abs() * n;
        for (int i = 0; i < n; ++i) {
            double yi = 0.0;
            for (int j = 0; j < n; ++j) yi += d(i, j) * x[j];
            CHECK(std::abs(y[i] - yi) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("from_triplets sums duplicates") {
    std::vector<Triplet> t = {{0, 1, 0.5}, {1, 0, 0.5}, {0, 1, 0.25}, {1, 0, 0.25},
                              {0, 0, 1.0}, {1, 1, 1.0}, {0, 0, 2.0}};
    SparseMatrixCSR a = SparseMatrixCSR::from_triplets(2, std::move(t));
    CHECK(a.nnz() == 4);
    DenseSymmetric d = to_dense(a);
    CHECK(d(0, 0) == doctest::Approx(3.0));
    CHECK(d(0, 1) == doctest::Approx(0.75));
    CHECK(d(1, 0) == doctest::Approx(0.75));
    CHECK(d(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("constructor rejects asymmetric input") {
    CHECK_THROWS(SparseMatrixCSR(2, {0, 1, 2}, {1, 0}, {1.0, 2.0}));
    CHECK_THROWS(SparseMatrixCSR(2, {0, 1, 1}, {1}, {1.0}));               // pattern one-sided
    CHECK_THROWS(SparseMatrixCSR(2, {0, 2, 3}, {0, 1, 0}, {1, 2, 3}));     // value mismatch across diagonal
    CHECK_NOTHROW(SparseMatrixCSR(2, {0, 2, 4}, {0, 1, 0, 1}, {1, 2, 2, 5}));
    CHECK_THROWS(SparseMatrixCSR(2, {0, 2, 4}, {1, 0, 0, 1}, {2, 1, 2, 5}));  // unsorted columns
    CHECK_THROWS(SparseMatrixCSR::from_triplets(2, {{0, 2, 1.0}}));           // out of range
}

TEST_CASE("matrix market round trip is byte identical") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    int n = 24;
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, val(rng) * 1e3});
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int e = 0; e < 40; ++e) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        double v = val(rng) * 1e-7;
        t.push_back({i, j, v});
        t.push_back({j, i, v});
    }
    SparseMatrixCSR a = SparseMatrixCSR::from_triplets(n, std::move(t));

    std::ostringstream first;
    write_matrix_market(a, first);
    std::istringstream back(first.str());
    SparseMatrixCSR b = read_matrix_market(back);
    CHECK(b.order() == a.order());
    CHECK(b.nnz() == a.nnz());
    std::ostringstream second;
    write_matrix_market(b, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("matrix market reader handles general symmetry and comments") {
    std::string text =
        "%%MatrixMarket matrix coordinate real general\n"
        "% a comment\n"
        "2 2 4\n"
        "1 1 2.0\n"
        "1 2 -1.0\n"
        "2 1 -1.0\n"
        "2 2 2.0\n";
    std::istringstream in(text);
    SparseMatrixCSR a = read_matrix_market(in);
    CHECK(a.order() == 2);
    CHECK(a.nnz() == 4);
    Vector y = a.apply(Vector{1.0, 1.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(1.0));
}

TEST_CASE("matrix market reader mirrors symmetric storage") {
    std::string text =
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "3 3 4\n"
        "1 1 2.0\n"
        "2 1 -1.0\n"
        "2 2 2.0\n"
        "3 3 2.0\n";
    std::istringstream in(text);
    SparseMatrixCSR a = read_matrix_market(in);
    CHECK(a.nnz() == 5);
    DenseSymmetric d = to_dense(a);
    CHECK(d(0, 1) == doctest::Approx(-1.0));
    CHECK(d(1, 0) == doctest::Approx(-1.0));
}

TEST_CASE("matrix market reader rejects malformed input") {
    auto reject = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS(read_matrix_market(in));
    };
    reject("");
    reject("%%MatrixMarket matrix array real general\n2 2\n1 0 0 1\n");
    reject("%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1 0\n");
    reject("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1.0\n");
    reject("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n");     // count short
    reject("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1.0\n");     // index range
    reject("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n1 2 5\n2 2 1\n");  // missing mirror
    reject("%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 1\n1 2 5\n2 1 4\n2 2 1\n");  // asymmetric
}

TEST_CASE("retained-region generator matches the hand oracle at nx=2") {
    SparseMatrixCSR a = gen_laplacian_L(2);
    REQUIRE(a.order() == 3);
    DenseSymmetric d = to_dense(a);
    double expected[3][3] = {{12.0, -3.0, -3.0}, {-3.0, 12.0, 0.0}, {-3.0, 0.0, 12.0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(expected[i][j]));
    // eigenvalues of the 3-by-3 operator: 12 and 12 +/- 3 sqrt 2
    Vector ev = oracle::sym_eigenvalues(d);
    CHECK(ev[0] == doctest::Approx(12.0 - 3.0 * std::sqrt(2.0)));
    CHECK(ev[1] == doctest::Approx(12.0));
    CHECK(ev[2] == doctest::Approx(12.0 + 3.0 * std::sqrt(2.0)));
}

TEST_CASE("retained-region generator agrees with a dense reassembly") {
    for (int nx : {2, 4, 6, 8, 10}) {
        SparseMatrixCSR a = gen_laplacian_L(nx);
        CHECK(a.order() == 3 * nx * nx / 4);
        DenseSymmetric d = to_dense(a);
        DenseSymmetric ref = dense_laplacian_L(nx);
        double maxdiff = 0.0;
        for (int i = 0; i < a.order(); ++i)
            for (int j = 0; j < a.order(); ++j) maxdiff = std::max(maxdiff, std::abs(d(i, j) - ref(i, j)));
        CHECK(maxdiff == 0.0);
    }
}

TEST_CASE("retained-region operator is positive definite") {
    for (int nx : {4, 8}) {
        Vector ev = oracle::sym_eigenvalues(to_dense(gen_laplacian_L(nx)));
        CHECK(ev.front() > 0.0);
        // Dirichlet boundary keeps the whole spectrum inside (0, 8 scale)
        CHECK(ev.back() < 8.0 * 0.75 * nx * nx);
    }
}

TEST_CASE("retained-region generator rejects odd or tiny sizes") {
    CHECK_THROWS(gen_laplacian_L(3));
    CHECK_THROWS(gen_laplacian_L(0));
    CHECK_THROWS(gen_laplacian_L(-2));
}

TEST_CASE("retained-region generator scales to large grids") {
    SparseMatrixCSR a = gen_laplacian_L(300);
    CHECK(a.order() == 67500);
    // interior stencil rows carry the full five entries
    long five = 0;
    for (int i = 0; i < a.order(); ++i)
        if (a.row_ptr()[i + 1] - a.row_ptr()[i] == 5) ++five;
    CHECK(five > a.order() / 2);
    // constant vector probes the boundary rows only
    Vector ones(a.order(), 1.0);
    Vector y = a.apply(ones);
    double s = 0.75 * 300.0 * 300.0;
    long interior_zeros = 0;
    for (double yi : y)
        if (yi == 0.0) ++interior_zeros;
    CHECK(interior_zeros == five);
    for (double yi : y) CHECK(yi >= -1e-12 * s);
}
