#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "lancom/types.hpp"

namespace lancom {

// Thrown when the requested spectral gap is so narrow that the step filter
// would need degree above the cap of 200. Callers react by widening the gap.
struct DegreeCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One conjugate pair of filter poles, real +/- i*imag with imag > 0.
struct PolePair {
    double real;
    double imag;
};

// Rational step filter r(x) approximating the indicator of (-inf, tau):
// r = (1 - S(x - tau))/2 with S an odd sign approximant on +/-[delta, eta].
// S(y) = scale_M * G(y/eta) where G(x) = x * prod_j (x^2 + c_{2j}) / (x^2 + c_{2j-1})
// and c holds c_1..c_2p in order. Immutable value object.
struct ZolotarevFilter {
    double tau;
    double delta;
    double eta;
    double tol_ra;
    int degree_d;        // value of the degree bound at construction
    int p;               // half-degree actually used; numerator degree is 2p+1
    std::vector<PolePair> finite_poles;  // p conjugate pairs, real part always tau
    int infinite_pole_count;             // always 2
    double achieved_error;               // measured sup error on the validation grid
    double scale_M;
    std::vector<double> c;

    // all 2p finite poles, pair-adjacent: +i y_1, -i y_1, +i y_2, ...
    std::vector<std::complex<double>> pole_list() const;
};

// Degree bound ceil((2/pi^2) * ln(4/tol_ra) * ln(4 eta/delta)), never negative.
// Requires tol_ra in (0,1) and delta, eta > 0; delta may exceed eta here
// (the strict delta <= eta domain is enforced by build_filter).
int required_degree(double tol_ra, double delta, double eta);

// Complete elliptic integral K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t),
// computed by arithmetic-geometric-mean iteration. Requires 0 <= k < 1.
double ellipk(double k);

struct JacobiValues {
    double sn;
    double cn;
    double dn;
};

// Jacobi elliptic functions of real argument via the descending
// arithmetic-geometric-mean recurrence. Requires 0 <= k < 1.
JacobiValues jacobi_sn_cn_dn(double u, double k);

// Sup error over the validation grid of the step filter built at half-degree p
// for the band pair +/-[delta, eta] (shift-invariant, so tau is immaterial).
double filter_error_at(double delta, double eta, int p);

// Constructs the step filter for shift tau, half-gap delta, half-width eta.
// The half-degree starts at ceil(degree_bound/2) and grows until the measured
// grid error drops below tol_ra. Throws DegreeCapError when the bound exceeds 200.
ZolotarevFilter build_filter(double tau, double delta, double eta, double tol_ra);

// Evaluates r at x using the factored form; stable for |x - tau| <= 10 eta.
double evaluate_filter(const ZolotarevFilter& f, double x);

}  // namespace lancom
