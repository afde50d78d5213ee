#include "lancom/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lancom {

namespace {

void fail(const std::string& what) { throw std::runtime_error(what); }

}  // namespace

SparseMatrixCSR::SparseMatrixCSR(int n, std::vector<int> row_ptr, std::vector<int> col_idx, Vector values)
    : n_(n), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
    if (n < 0) fail("SparseMatrixCSR: negative order");
    if (static_cast<int>(row_ptr_.size()) != n + 1) fail("SparseMatrixCSR: row_ptr length");
    if (row_ptr_[0] != 0 || row_ptr_[n] != static_cast<int>(col_idx_.size()))
        fail("SparseMatrixCSR: row_ptr range");
    if (col_idx_.size() != values_.size()) fail("SparseMatrixCSR: col_idx/values length mismatch");
    for (int i = 0; i < n; ++i) {
        if (row_ptr_[i + 1] < row_ptr_[i]) fail("SparseMatrixCSR: row_ptr not monotone");
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            if (col_idx_[p] < 0 || col_idx_[p] >= n) fail("SparseMatrixCSR: column index out of range");
            if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1])
                fail("SparseMatrixCSR: column indices not strictly increasing");
        }
    }
    // symmetry check against the transpose, pattern and values
    std::vector<int> tcount(n, 0);
    for (int c : col_idx_) ++tcount[c];
    std::vector<int> tptr(n + 1, 0);
    for (int i = 0; i < n; ++i) tptr[i + 1] = tptr[i] + tcount[i];
    std::vector<int> trow(col_idx_.size());
    Vector tval(values_.size());
    std::vector<int> cursor(tptr.begin(), tptr.end() - 1);
    for (int i = 0; i < n; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            int dst = cursor[col_idx_[p]]++;
            trow[dst] = i;
            tval[dst] = values_[p];
        }
    for (int i = 0; i < n; ++i) {
        if (tptr[i + 1] - tptr[i] != row_ptr_[i + 1] - row_ptr_[i])
            fail("SparseMatrixCSR: pattern not symmetric");
        for (int p = row_ptr_[i], q = tptr[i]; p < row_ptr_[i + 1]; ++p, ++q) {
            if (trow[q] != col_idx_[p]) fail("SparseMatrixCSR: pattern not symmetric");
            double a = values_[p];
            double b = tval[q];
            if (std::abs(a - b) > 1e-15 * std::max(std::abs(a), std::abs(b)))
                fail("SparseMatrixCSR: values not symmetric");
        }
    }
}

SparseMatrixCSR SparseMatrixCSR::from_triplets(int n, std::vector<Triplet> entries) {
    for (const Triplet& t : entries)
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            fail("from_triplets: index out of range");
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<int> row_ptr(n + 1, 0);
    std::vector<int> col_idx;
    Vector values;
    col_idx.reserve(entries.size());
    values.reserve(entries.size());
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col)
            sum += entries[j++].value;
        col_idx.push_back(entries[i].col);
        values.push_back(sum);
        ++row_ptr[entries[i].row + 1];
        i = j;
    }
    for (int r = 0; r < n; ++r) row_ptr[r + 1] += row_ptr[r];
    return SparseMatrixCSR(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

void SparseMatrixCSR::apply(const double* x, double* y) const {
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
        y[i] = s;
    }
}

Vector SparseMatrixCSR::apply(const Vector& x) const {
    if (static_cast<int>(x.size()) != n_) fail("matvec: dimension mismatch");
    Vector y(n_);
    apply(x.data(), y.data());
    return y;
}

double SparseMatrixCSR::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Vector matvec(const SparseMatrixCSR& a, const Vector& x) { return a.apply(x); }

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

SparseMatrixCSR read_matrix_market(std::istream& in) {
    std::string banner;
    if (!std::getline(in, banner)) fail("matrix market: empty input");
    std::istringstream bs(banner);
    std::string tag, object, format, field, symmetry;
    bs >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket") fail("matrix market: missing banner");
    if (lower(object) != "matrix") fail("matrix market: unsupported object " + object);
    if (lower(format) != "coordinate") fail("matrix market: unsupported format " + format);
    if (lower(field) != "real") fail("matrix market: unsupported field " + field);
    std::string sym = lower(symmetry);
    if (sym != "symmetric" && sym != "general") fail("matrix market: unsupported symmetry " + symmetry);

    std::string line;
    int rows = -1, cols = -1;
    long nnz = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz)) fail("matrix market: malformed size line");
        break;
    }
    if (rows < 0) fail("matrix market: missing size line");
    if (rows != cols) fail("matrix market: matrix not square");

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(nnz) * (sym == "symmetric" ? 2 : 1));
    long seen = 0;
    double max_entry = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        int i, j;
        double v;
        if (!(ls >> i >> j >> v)) fail("matrix market: malformed entry line");
        if (i < 1 || i > rows || j < 1 || j > cols) fail("matrix market: index out of range");
        entries.push_back({i - 1, j - 1, v});
        max_entry = std::max(max_entry, std::abs(v));
        if (sym == "symmetric" && i != j) entries.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (seen != nnz) fail("matrix market: entry count does not match size line");

    if (sym == "general") {
        // validate symmetry before handing over to the CSR constructor so the
        // 1e-12 relative contract applies instead of the stricter CSR one
        std::vector<Triplet> sorted = entries;
        std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        auto find = [&](int r, int c) -> const Triplet* {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(r, c),
                                       [](const Triplet& t, const std::pair<int, int>& key) {
                                           return t.row != key.first ? t.row < key.first : t.col < key.second;
                                       });
            if (it == sorted.end() || it->row != r || it->col != c) return nullptr;
            return &*it;
        };
        for (const Triplet& t : sorted) {
            const Triplet* mirror = find(t.col, t.row);
            if (mirror == nullptr || std::abs(mirror->value - t.value) > 1e-12 * max_entry)
                fail("matrix market: general matrix is not symmetric");
        }
        // average the two triangles so the CSR symmetry check cannot trip
        // over representable round-off in the file
        std::vector<Triplet> merged;
        merged.reserve(sorted.size());
        for (const Triplet& t : sorted) {
            const Triplet* mirror = find(t.col, t.row);
            merged.push_back({t.row, t.col, 0.5 * (t.value + mirror->value)});
        }
        entries = std::move(merged);
    }
    return SparseMatrixCSR::from_triplets(rows, std::move(entries));
}

SparseMatrixCSR read_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail("matrix market: cannot open " + path);
    return read_matrix_market(f);
}

void write_matrix_market(const SparseMatrixCSR& a, std::ostream& out) {
    long lower_nnz = 0;
    for (int i = 0; i < a.order(); ++i)
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
            if (a.col_idx()[p] <= i) ++lower_nnz;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << a.order() << " " << a.order() << " " << lower_nnz << "\n";
    char buf[64];
    for (int i = 0; i < a.order(); ++i)
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
            int j = a.col_idx()[p];
            if (j > i) continue;
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, j + 1, a.values()[p]);
            out << buf;
        }
}

void write_matrix_market(const SparseMatrixCSR& a, const std::string& path) {
    std::ofstream f(path);
    if (!f) fail("matrix market: cannot open " + path + " for writing");
    write_matrix_market(a, f);
}

SparseMatrixCSR gen_laplacian_L(int nx) {
    if (nx < 2 || nx % 2 != 0) throw std::invalid_argument("gen_laplacian_L: nx must be even and >= 2");
    int half = nx / 2;
    auto retained = [&](int a, int b) { return a >= 1 && a <= nx && b >= 1 && b <= nx && !(a > half && b > half); };

    // column-major numbering over retained points
    std::vector<int> id(static_cast<std::size_t>(nx) * nx, -1);
    auto idx = [&](int a, int b) -> int& { return id[static_cast<std::size_t>(a - 1) * nx + (b - 1)]; };
    int n = 0;
    for (int a = 1; a <= nx; ++a)
        for (int b = 1; b <= nx; ++b)
            if (retained(a, b)) idx(a, b) = n++;

    const double scale = 0.75 * static_cast<double>(nx) * nx;
    std::vector<int> row_ptr(n + 1, 0);
    std::vector<int> col_idx;
    Vector values;
    col_idx.reserve(static_cast<std::size_t>(n) * 5);
    values.reserve(static_cast<std::size_t>(n) * 5);
    for (int a = 1; a <= nx; ++a)
        for (int b = 1; b <= nx; ++b) {
            if (!retained(a, b)) continue;
            int self = idx(a, b);
            // neighbor ids in ascending order under column-major numbering
            const int nbr[4][2] = {{a - 1, b}, {a, b - 1}, {a, b + 1}, {a + 1, b}};
            int cols[5];
            double vals[5];
            int cnt = 0;
            for (int t = 0; t < 2; ++t)
                if (retained(nbr[t][0], nbr[t][1])) {
                    cols[cnt] = idx(nbr[t][0], nbr[t][1]);
                    vals[cnt++] = -scale;
                }
            cols[cnt] = self;
            vals[cnt++] = 4.0 * scale;
            for (int t = 2; t < 4; ++t)
                if (retained(nbr[t][0], nbr[t][1])) {
                    cols[cnt] = idx(nbr[t][0], nbr[t][1]);
                    vals[cnt++] = -scale;
                }
            for (int t = 0; t < cnt; ++t) {
                col_idx.push_back(cols[t]);
                values.push_back(vals[t]);
            }
            row_ptr[self + 1] = cnt;
        }
    for (int r = 0; r < n; ++r) row_ptr[r + 1] += row_ptr[r];
    return SparseMatrixCSR(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace lancom
