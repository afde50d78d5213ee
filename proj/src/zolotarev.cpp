#include "lancom/zolotarev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lancom {

std::vector<std::complex<double>> ZolotarevFilter::pole_list() const {
    std::vector<std::complex<double>> out;
    out.reserve(finite_poles.size() * 2);
    for (const PolePair& pp : finite_poles) {
        out.emplace_back(pp.real, pp.imag);
        out.emplace_back(pp.real, -pp.imag);
    }
    return out;
}

int required_degree(double tol_ra, double delta, double eta) {
    if (!(tol_ra > 0.0 && tol_ra < 1.0)) throw std::invalid_argument("required_degree: tol_ra must lie in (0,1)");
    if (!(delta > 0.0)) throw std::invalid_argument("required_degree: delta must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("required_degree: eta must be positive");
    const double pi = std::numbers::pi;
    double raw = (2.0 / (pi * pi)) * std::log(4.0 / tol_ra) * std::log(4.0 * eta / delta);
    if (raw <= 0.0) return 0;
    return static_cast<int>(std::ceil(raw));
}

double ellipk(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("ellipk: modulus must lie in [0,1)");
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int it = 0; it < 40 && (a - b) > 4.0 * std::numeric_limits<double>::epsilon() * a; ++it) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (a + b);
}

JacobiValues jacobi_sn_cn_dn(double u, double k) {
    if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("jacobi_sn_cn_dn: modulus must lie in [0,1)");
    double kprime = std::sqrt((1.0 - k) * (1.0 + k));
    if (k < 1e-10) {
        double s = std::sin(u);
        double c = std::cos(u);
        return {s, c, std::sqrt(kprime * kprime + k * k * c * c)};
    }
    double a_seq[42], c_seq[42];
    double a = 1.0, b = kprime, c = k;
    a_seq[0] = a;
    c_seq[0] = c;
    int n = 0;
    while (std::abs(c) > std::numeric_limits<double>::epsilon() * a && n < 40) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        ++n;
        a_seq[n] = a;
        c_seq[n] = c;
    }
    double phi = std::ldexp(a * u, n);
    for (int i = n; i >= 1; --i) {
        double s = (c_seq[i] / a_seq[i]) * std::sin(phi);
        s = std::clamp(s, -1.0, 1.0);
        phi = 0.5 * (std::asin(s) + phi);
    }
    double sn = std::sin(phi);
    double cn = std::cos(phi);
    // dn from dn^2 = k'^2 + k^2 cn^2, which stays accurate where cn vanishes
    double dn = std::sqrt(kprime * kprime + k * k * cn * cn);
    return {sn, cn, dn};
}

namespace {

struct SignApproximant {
    double scale_M;
    std::vector<double> c;  // c_1..c_2p
    double error;           // sup error of (1 - M G)/2 against the step, on the grid
};

// Builds the odd sign approximant of half-degree p on +/-[ell, 1] and measures
// the step-filter error on a geometric 5000-point-per-side grid.
SignApproximant sign_approximant(double ell, int p) {
    double ellp = std::sqrt((1.0 - ell) * (1.0 + ell));
    double quarter = ellipk(ellp);
    int nsec = 2 * p + 1;
    SignApproximant s;
    s.c.resize(2 * p);
    for (int j = 1; j <= 2 * p; ++j) {
        JacobiValues jv = jacobi_sn_cn_dn(j * quarter / nsec, ellp);
        s.c[j - 1] = ell * ell * (jv.sn * jv.sn) / (jv.cn * jv.cn);
    }
    auto G = [&](double x) {
        double x2 = x * x;
        double g = x;
        for (int j = 0; j + 1 < 2 * p; j += 2) g *= (x2 + s.c[j + 1]) / (x2 + s.c[j]);
        return g;
    };
    double gmin = std::numeric_limits<double>::infinity();
    double gmax = -gmin;
    for (int i = 0; i <= nsec; ++i) {
        JacobiValues jv = jacobi_sn_cn_dn(i * quarter / nsec, ellp);
        double g = G(ell / jv.dn);
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
    }
    s.scale_M = 2.0 / (gmin + gmax);
    double worst = 0.0;
    const int per_side = 5000;
    double log_ratio = std::log(1.0 / ell);
    for (int i = 0; i < per_side; ++i) {
        double x = ell * std::exp(log_ratio * (static_cast<double>(i) / (per_side - 1)));
        double r_right = 0.5 * (1.0 - s.scale_M * G(x));
        double r_left = 0.5 * (1.0 - s.scale_M * G(-x));
        worst = std::max(worst, std::abs(r_right));
        worst = std::max(worst, std::abs(r_left - 1.0));
    }
    s.error = worst;
    return s;
}

}  // namespace

double filter_error_at(double delta, double eta, int p) {
    if (!(delta > 0.0) || !(eta >= delta)) throw std::invalid_argument("filter_error_at: need 0 < delta <= eta");
    if (p < 1) throw std::invalid_argument("filter_error_at: half-degree must be >= 1");
    return sign_approximant(delta / eta, p).error;
}

ZolotarevFilter build_filter(double tau, double delta, double eta, double tol_ra) {
    if (!(delta > 0.0) || !(eta >= delta)) throw std::invalid_argument("build_filter: need 0 < delta <= eta");
    if (!(tol_ra > 0.0 && tol_ra < 1.0)) throw std::invalid_argument("build_filter: tol_ra must lie in (0,1)");
    int d = required_degree(tol_ra, delta, eta);
    if (d > 200) throw DegreeCapError("build_filter: degree bound exceeds cap 200, gap too narrow");
    double ell = delta / eta;
    int p0 = std::max(1, (d + 1) / 2);
    for (int p = p0; p <= p0 + 8; ++p) {
        SignApproximant s = sign_approximant(ell, p);
        if (s.error < tol_ra) {
            ZolotarevFilter f;
            f.tau = tau;
            f.delta = delta;
            f.eta = eta;
            f.tol_ra = tol_ra;
            f.degree_d = d;
            f.p = p;
            f.infinite_pole_count = 2;
            f.achieved_error = s.error;
            f.scale_M = s.scale_M;
            f.c = std::move(s.c);
            f.finite_poles.reserve(p);
            for (int j = 0; j < p; ++j) f.finite_poles.push_back({tau, eta * std::sqrt(f.c[2 * j])});
            return f;
        }
    }
    throw std::runtime_error("build_filter: grid validation did not reach tol_ra");
}

double evaluate_filter(const ZolotarevFilter& f, double x) {
    double y = (x - f.tau) / f.eta;
    double y2 = y * y;
    double g = y;
    for (std::size_t j = 0; j + 1 < f.c.size(); j += 2) g *= (y2 + f.c[j + 1]) / (y2 + f.c[j]);
    return 0.5 * (1.0 - f.scale_M * g);
}

}  // namespace lancom
