#include "cli_lib.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lancom/krylov_schur.hpp"
#include "lancom/lanczos.hpp"
#include "lancom/sparse.hpp"

namespace lancom_cli {

using namespace lancom;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

SparseMatrixCSR load_matrix(const std::string& src) {
    const std::string prefix = "laplacian-l:";
    if (src.rfind(prefix, 0) == 0) {
        int nx = std::stoi(src.substr(prefix.size()));
        return gen_laplacian_L(nx);
    }
    return read_matrix_market(src);
}

// basis column cap from the memory budget env var, 0 when unset
int memory_cap_columns(int n) {
    const char* env = std::getenv("LANCOM_MAX_MEMORY_MB");
    if (!env || !*env) return 0;
    double mb = std::atof(env);
    if (mb <= 0.0) return 0;
    double cols = mb * 1048576.0 / (8.0 * n);
    return std::max(1, static_cast<int>(cols));
}

// upper bound on the spectral norm from one row-sum sweep
double gershgorin_norm(const SparseMatrixCSR& a) {
    double best = 0.0;
    for (int i = 0; i < a.order(); ++i) {
        double row = 0.0;
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) row += std::abs(a.values()[p]);
        best = std::max(best, row);
    }
    return best;
}

void emit_values(std::ostream& os, const Vector& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << fmt_double(v[i]);
    }
    os << "]";
}

void emit_history_json(std::ostream& os, const std::string& method, int n, int k, int m, int ell,
                       double tol_res, double tol_ra, std::uint64_t seed, const SolveOutput& sol,
                       double residual_true) {
    os << "{\n";
    os << "  \"method\": \"" << method << "\",\n";
    os << "  \"n\": " << n << ",\n";
    os << "  \"k\": " << k << ",\n";
    os << "  \"m\": " << m << ",\n";
    if (ell >= 0) os << "  \"ell\": " << ell << ",\n";
    os << "  \"tol_res\": " << fmt_double(tol_res) << ",\n";
    os << "  \"tol_ra\": " << fmt_double(tol_ra) << ",\n";
    os << "  \"seed\": " << seed << ",\n";
    os << "  \"checkpoints\": [\n";
    const auto& cps = sol.history.checkpoints;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const Checkpoint& cp = cps[i];
        os << "    { \"matvecs\": " << cp.matvecs << ", \"ritz\": ";
        emit_values(os, cp.ritz);
        os << ", \"residual_estimate\": " << fmt_double(cp.residual_estimate);
        os << ", \"event\": \"" << cp.event << "\"";
        if (cp.event == "compress")
            os << ", \"ell\": " << cp.ell << ", \"k_hat\": " << cp.k_hat << ", \"p\": " << cp.p;
        os << " }" << (i + 1 < cps.size() ? "," : "") << "\n";
    }
    os << "  ],\n";
    os << "  \"converged\": " << (sol.result.converged ? "true" : "false") << ",\n";
    os << "  \"final\": { \"values\": ";
    emit_values(os, sol.result.values);
    os << ", \"residual_true\": " << fmt_double(residual_true) << " }\n";
    os << "}\n";
}

void emit_history_csv(std::ostream& os, int k, const SolveOutput& sol) {
    os << "matvecs,event,residual_estimate,ell,k_hat,p";
    for (int i = 1; i <= k; ++i) os << ",ritz_" << i;
    os << "\n";
    for (const Checkpoint& cp : sol.history.checkpoints) {
        os << cp.matvecs << "," << cp.event << "," << fmt_double(cp.residual_estimate);
        if (cp.event == "compress")
            os << "," << cp.ell << "," << cp.k_hat << "," << cp.p;
        else
            os << ",,,";
        for (int i = 0; i < k; ++i) {
            os << ",";
            if (i < static_cast<int>(cp.ritz.size())) os << fmt_double(cp.ritz[i]);
        }
        os << "\n";
    }
}

// residual plateau across the last full-basis checks: three consecutive
// checks without meaningful improvement, still unresolved at termination
bool stagnated(const ConvergenceHistory& h) {
    Vector at_boundary;
    for (const Checkpoint& cp : h.checkpoints)
        if (cp.event == "compress" || cp.event == "grow-m" || cp.event == "converged")
            at_boundary.push_back(cp.residual_estimate);
    int run = 0;
    for (std::size_t i = 1; i < at_boundary.size(); ++i) {
        if (at_boundary[i] > 0.99 * at_boundary[i - 1]) ++run;
        else run = 0;
    }
    return run >= 3;
}

struct SolveConfig {
    std::string method = "lc";
    std::string matrix;
    int k = 1;
    int m = 0;
    int ell = 0;
    double tol_res = 1e-8;
    double tol_ra = 0.0;
    std::uint64_t seed = 42;
    long max_matvecs = 200000;
    std::string fill = "on";
    std::string out_path;
    std::string csv_path;
};

double default_tol_ra(int k, double requested) {
    if (requested > 0.0) return requested;
    return k <= 4 ? 1e-6 : 1e-7;
}

int cmd_solve(const SolveConfig& cfg, std::ostream& out, std::ostream& err) {
    SparseMatrixCSR a = load_matrix(cfg.matrix);
    int n = a.order();
    SolverOptions opt;
    opt.max_matvecs = cfg.max_matvecs;
    opt.max_basis_columns = memory_cap_columns(n);
    opt.fill_in = cfg.fill != "off";
    double tol_ra = default_tol_ra(cfg.k, cfg.tol_ra);

    SolveOutput sol;
    int m_emitted = cfg.m;
    int ell_emitted = -1;
    double tol_ra_emitted = 0.0;
    if (cfg.method == "lc") {
        if (cfg.m <= 0) throw std::invalid_argument("solve: --m is required for method lc");
        sol = lc_solve(a, cfg.k, cfg.m, cfg.tol_res, tol_ra, cfg.seed, opt);
        tol_ra_emitted = tol_ra;
    } else if (cfg.method == "ks") {
        if (cfg.m <= 0) throw std::invalid_argument("solve: --m is required for method ks");
        int ell = cfg.ell > 0 ? cfg.ell : cfg.m / 2;
        sol = ks_solve(a, cfg.k, cfg.m, ell, cfg.tol_res, cfg.seed, opt);
        ell_emitted = ell;
    } else if (cfg.method == "lanczos") {
        sol = lanczos_solve(a, cfg.k, cfg.tol_res, cfg.seed, opt);
        m_emitted = 0;
    } else {
        throw std::invalid_argument("solve: unknown method '" + cfg.method + "'");
    }

    double rtrue = true_residual(a, sol.result.vectors, sol.result.values);
    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("solve: cannot open output file " + cfg.out_path);
        emit_history_json(f, cfg.method, n, cfg.k, m_emitted, ell_emitted, cfg.tol_res,
                          tol_ra_emitted, cfg.seed, sol, rtrue);
    } else {
        emit_history_json(out, cfg.method, n, cfg.k, m_emitted, ell_emitted, cfg.tol_res,
                          tol_ra_emitted, cfg.seed, sol, rtrue);
    }
    if (!cfg.csv_path.empty()) {
        std::ofstream f(cfg.csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("solve: cannot open csv file " + cfg.csv_path);
        emit_history_csv(f, cfg.k, sol);
    }
    if ((cfg.method == "lc" || cfg.method == "ks") && stagnated(sol.history))
        err << "note: residual estimate stagnated over three consecutive full-basis checks\n";
    return sol.result.converged ? 0 : 2;
}

struct GenConfig {
    std::string spec;
    int nx = 0;
    std::string out_path;
};

int cmd_gen(const GenConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.spec != "laplacian-l")
        throw std::invalid_argument("gen: unknown generator '" + cfg.spec + "'");
    if (cfg.nx < 2 || cfg.nx % 2 != 0)
        throw std::invalid_argument("gen: --nx must be even and at least 2");
    SparseMatrixCSR a = gen_laplacian_L(cfg.nx);
    std::string path = cfg.out_path.empty()
                           ? "laplacian-l-" + std::to_string(cfg.nx) + ".mtx"
                           : cfg.out_path;
    write_matrix_market(a, path);
    out << "wrote " << path << " n=" << a.order() << " nnz=" << a.nnz() << "\n";
    return 0;
}

struct CompareConfig {
    std::string matrix;
    int k = 1;
    int m = 0;
    int ell = 0;
    double tol_ra = 0.0;
    std::uint64_t seed = 42;
    long max_matvecs = 5000;
    long ref_max_matvecs = 3000;
    std::string out_path;
};

struct ErrorSeries {
    std::vector<long> matvecs;
    Vector err;
};

// error of the k lowest Ritz values against the reference: relative trace
// error for definite spectra, absolute trace error otherwise
double block_error(const Vector& ritz, const Vector& ref, bool relative) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        num += ritz[i] - ref[i];
        den += ref[i];
    }
    return relative ? num / den : num;
}

// first matvec count from which the error stays at or below tau
std::optional<long> sustained_crossing(const ErrorSeries& s, double tau) {
    std::ptrdiff_t last_bad = -1;
    for (std::size_t i = 0; i < s.err.size(); ++i)
        if (s.err[i] > tau) last_bad = static_cast<std::ptrdiff_t>(i);
    std::size_t first_good = static_cast<std::size_t>(last_bad + 1);
    if (first_good >= s.err.size()) return std::nullopt;
    return s.matvecs[first_good];
}

int cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err) {
    SparseMatrixCSR a = load_matrix(cfg.matrix);
    int n = a.order();
    if (cfg.m <= 0) throw std::invalid_argument("compare: --m is required");
    int ell = cfg.ell > 0 ? cfg.ell : cfg.m / 2;
    double tol_ra = default_tol_ra(cfg.k, cfg.tol_ra);

    // reference spectrum: dense for small orders, a tight plain-Lanczos run
    // otherwise
    Vector ref(cfg.k);
    std::string ref_source;
    if (n <= 2000) {
        DenseSymmetric d(n);
        for (int i = 0; i < n; ++i)
            for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
                if (a.col_idx()[p] >= i) d.set(i, a.col_idx()[p], a.values()[p]);
        Vector all = sym_eigenvalues(d);
        for (int i = 0; i < cfg.k; ++i) ref[i] = all[i];
        ref_source = "dense";
    } else {
        double scale = gershgorin_norm(a);
        double tol_ref = std::min(0.5, 1e-12 * std::max(scale, 1.0));
        SolverOptions ropt;
        ropt.max_matvecs = cfg.ref_max_matvecs;
        SolveOutput r = lanczos_solve(a, cfg.k, tol_ref, cfg.seed, ropt);
        if (!r.result.converged)
            throw std::runtime_error("compare: reference run did not converge within its budget");
        ref = r.result.values;
        ref_source = "lanczos";
    }
    bool spd = ref[0] > 0.0;

    const Vector grid = {1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    double finest = grid.back();

    auto run_one = [&](bool use_lc) {
        SolverOptions opt;
        opt.max_matvecs = cfg.max_matvecs;
        opt.max_basis_columns = memory_cap_columns(n);
        ErrorSeries series;
        opt.stop_predicate = [&](const Checkpoint& cp) {
            if (static_cast<int>(cp.ritz.size()) < cfg.k) return false;
            double e = block_error(cp.ritz, ref, spd);
            series.matvecs.push_back(cp.matvecs);
            series.err.push_back(e);
            return e <= 0.01 * finest;
        };
        SolveOutput sol =
            use_lc ? lc_solve(a, cfg.k, cfg.m, 1e-300, tol_ra, cfg.seed, opt)
                   : ks_solve(a, cfg.k, cfg.m, ell, 1e-300, cfg.seed, opt);
        return std::pair<SolveOutput, ErrorSeries>(std::move(sol), std::move(series));
    };
    auto [lc_sol, lc_series] = run_one(true);
    auto [ks_sol, ks_series] = run_one(false);

    std::ostringstream body;
    body << "{\n";
    body << "  \"n\": " << n << ",\n";
    body << "  \"k\": " << cfg.k << ",\n";
    body << "  \"m\": " << cfg.m << ",\n";
    body << "  \"ell\": " << ell << ",\n";
    body << "  \"tol_ra\": " << fmt_double(tol_ra) << ",\n";
    body << "  \"seed\": " << cfg.seed << ",\n";
    body << "  \"reference_source\": \"" << ref_source << "\",\n";
    body << "  \"spd\": " << (spd ? "true" : "false") << ",\n";
    body << "  \"reference_values\": ";
    emit_values(body, ref);
    body << ",\n  \"tolerances\": ";
    emit_values(body, grid);
    auto emit_counts = [&](const char* name, const ErrorSeries& s) {
        body << ",\n  \"" << name << "\": [";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (i) body << ", ";
            auto c = sustained_crossing(s, grid[i]);
            if (c) body << *c;
            else body << "null";
        }
        body << "]";
    };
    emit_counts("ks_matvecs", ks_series);
    emit_counts("lc_matvecs", lc_series);
    body << ",\n  \"improvement\": [";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) body << ", ";
        auto cl = sustained_crossing(lc_series, grid[i]);
        auto ck = sustained_crossing(ks_series, grid[i]);
        if (cl && ck && *ck > 0)
            body << fmt_double(1.0 - static_cast<double>(*cl) / static_cast<double>(*ck));
        else
            body << "null";
    }
    body << "]";
    auto emit_series = [&](const char* name, const ErrorSeries& s) {
        body << ",\n  \"" << name << "\": [";
        for (std::size_t i = 0; i < s.err.size(); ++i) {
            if (i) body << ", ";
            body << "[" << s.matvecs[i] << ", " << fmt_double(s.err[i]) << "]";
        }
        body << "]";
    };
    emit_series("ks_error_series", ks_series);
    emit_series("lc_error_series", lc_series);
    body << "\n}\n";

    if (!cfg.out_path.empty()) {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("compare: cannot open output file " + cfg.out_path);
        f << body.str();
    } else {
        out << body.str();
    }
    (void)err;
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sparse symmetric eigensolver with basis compression"};
    app.require_subcommand(1);

    GenConfig gen;
    CLI::App* g = app.add_subcommand("gen", "generate a test matrix in Matrix Market form");
    g->add_option("spec", gen.spec, "generator name (laplacian-l)")->required();
    g->add_option("--nx", gen.nx, "grid parameter")->required();
    g->add_option("--out", gen.out_path, "output path (default laplacian-l-<nx>.mtx)");

    SolveConfig sc;
    CLI::App* s = app.add_subcommand("solve", "run one eigensolver and emit its history");
    s->add_option("--method", sc.method, "lc | ks | lanczos");
    s->add_option("--matrix", sc.matrix, "matrix file or laplacian-l:<nx>")->required();
    s->add_option("--k", sc.k, "number of wanted eigenpairs");
    s->add_option("--m", sc.m, "basis size before compression/restart");
    s->add_option("--ell", sc.ell, "thick-restart size (ks, default m/2)");
    s->add_option("--tol-res", sc.tol_res, "residual tolerance");
    s->add_option("--tol-ra", sc.tol_ra, "filter tolerance (default 1e-6 for k<=4, else 1e-7)");
    s->add_option("--seed", sc.seed, "starting vector seed");
    s->add_option("--max-matvecs", sc.max_matvecs, "matvec budget");
    s->add_option("--fill-in", sc.fill, "on | off (diagnostic)");
    s->add_option("--out", sc.out_path, "write JSON here instead of stdout");
    s->add_option("--csv", sc.csv_path, "also write checkpoints as CSV");

    CompareConfig cc;
    CLI::App* c = app.add_subcommand("compare", "run lc and ks against a reference spectrum");
    c->add_option("--matrix", cc.matrix, "matrix file or laplacian-l:<nx>")->required();
    c->add_option("--k", cc.k, "number of wanted eigenpairs");
    c->add_option("--m", cc.m, "basis size")->required();
    c->add_option("--ell", cc.ell, "thick-restart size (default m/2)");
    c->add_option("--tol-ra", cc.tol_ra, "filter tolerance");
    c->add_option("--seed", cc.seed, "shared starting seed");
    c->add_option("--max-matvecs", cc.max_matvecs, "per-method matvec budget");
    c->add_option("--ref-max-matvecs", cc.ref_max_matvecs, "reference run budget");
    c->add_option("--out", cc.out_path, "write report here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("lancom");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream usage;
        int code = app.exit(e, usage, usage);
        (out << usage.str()).flush();
        return code == 0 ? 0 : 1;
    }

    try {
        if (g->parsed()) return cmd_gen(gen, out, err);
        if (s->parsed()) return cmd_solve(sc, out, err);
        if (c->parsed()) return cmd_compare(cc, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace lancom_cli
