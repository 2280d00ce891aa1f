#pragma once

#include <cstdint>

#include "zm/common.hpp"

namespace zm {

// Which L-function a mean value is taken of, and to which power |L|^(2 power).
struct LSelector {
    enum class Tag { riemann, dedekind_gaussian };
    Tag tag = Tag::riemann;
    int power = 1;

    void validate() const;
};

cplx riemann_zeta(cplx s);
// Hurwitz zeta(s, a), a > 0.
cplx hurwitz_zeta(cplx s, double a);
// L(s, chi_4) for the nontrivial character mod 4; entire.
cplx dirichlet_l_chi4(cplx s);
// zeta of Q(i) = zeta(s) L(s, chi_4).
cplx dedekind_zeta_gaussian(cplx s);
cplx l_value(const LSelector& L, cplx s);

struct HeckeZetaOptions {
    // Split point of the theta integral. Zero picks a point on the unit circle
    // turned towards sign(Im s), which keeps the two halves free of
    // cancellation for large |Im s|.
    cplx split = 0.0;
    // Lattice norms summed are those with pi |n|^2 Re(split) below this budget
    // (and likewise for 1/split).
    double exponent_budget = 45.0;
};

// (1/4) sum over nonzero Gaussian integers n of (n/|n|)^(4p) |n|^(-2s),
// continued to all s (pole only at s = 1 for p = 0).
cplx hecke_zeta_gaussian(cplx s, int p, const HeckeZetaOptions& opt = {});

// Upper incomplete gamma Gamma(a, z), Re z > 0.
cplx upper_incomplete_gamma(cplx a, cplx z);

// sigma_lambda(n) = sum_{d | n} d^lambda. Exact integer arithmetic for
// integer lambda as long as the result fits; otherwise a compensated sum.
cplx divisor_function(std::int64_t n, cplx lambda);
// d(n); uses a sieve cache up to 10^6, trial division above.
std::int64_t divisor_count(std::int64_t n);

}  // namespace zm
