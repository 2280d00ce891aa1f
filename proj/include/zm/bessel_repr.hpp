#pragma once

#include "zm/quadrature.hpp"
#include "zm/report.hpp"

namespace zm {

enum class SingularityPolicy { limit, reject };

struct ReprOrderReal {
    cplx nu{};
    SingularityPolicy policy = SingularityPolicy::limit;
};

struct ReprOrderComplex {
    int p = 0;
    cplx nu{};
};

// Haar measures on the multiplicative groups and the normalisations under
// which the Kirillov maps are unitary.
struct MeasureConvention {
    static constexpr double real_factor = 1.0 / pi;     // (1/pi) du/|u|
    static constexpr double complex_factor = 2.0 / pi;  // (2/pi) du/|u|^2
};

// Bessel function of the principal series of PSL2(R):
// pi sqrt|u| / sin(pi nu) (J_{-2nu} - J_{2nu})(4 pi sqrt|u|), with I in place
// of J for u < 0. Evaluated through K (u < 0) and J, Y (u > 0), which are the
// analytic continuation across 2nu in Z.
cplx j_real(const ReprOrderReal& order, double u);

// Same kernel for PSL2(C). |2 pi u| <= 2: the entire J* products, Richardson
// in nu near integers; beyond: a product of Hankel functions in which the
// exponentially growing parts cancel exactly.
cplx j_complex(const ReprOrderComplex& order, cplx u);
// The J* form only (Richardson near integer nu). Exposed for cross-checks.
cplx j_complex_series(const ReprOrderComplex& order, cplx u);
// The Hankel form only, valid for every nu; exposed for cross-checks.
cplx j_complex_hankel(const ReprOrderComplex& order, cplx u);

// 4 pi |u|^2 (-1)^p int_0^inf l^{2nu-1} J_2p(2 pi |u| |z|) (z/|z|)^2p dl with
// z = l e^{i arg u} + 1/(l e^{i arg u}). The range is folded at l = 1 and the
// oscillatory tail beyond `split` (in units where 2 pi |u| split >= 2) is
// rotated.
cplx j_complex_via_integral(const ReprOrderComplex& order, cplx u, const QuadratureSpec& spec,
                            double split = 0.0);

// Truncated sum over |m| <= m_max of (-1)^max(|p|,|m|) J_|m+p|(Z) J_|m-p|(z) e^{2im theta}.
// If tail is given it receives the size of the outermost terms.
cplx graf_sum(int p, double Z, double z, double theta, int m_max, double* tail = nullptr);
// (-1)^p J_2p(|w|) (w/|w|)^2p with w = Z e^{i theta} + z e^{-i theta}.
cplx graf_closed(int p, double Z, double z, double theta);

// K_{nu,p}(r, q) = int_0^inf l^{2nu-1} J_|p+q|(r l) J_|p-q|(r/l) dl
cplx K_kernel(cplx nu, int p, double r, int q, const QuadratureSpec& spec);
// Its Mellin transform in r, in closed form (the version that checks out
// numerically; see verify_K_mellin).
cplx K_mellin_closed(cplx nu, int p, int q, cplx s);
// The transform with the nu signs of the denominator swapped.
cplx K_mellin_printed(cplx nu, int p, int q, cplx s);
VerificationReport verify_K_mellin(cplx nu, int p, int q, cplx s, const QuadratureSpec& spec, double tol);

// Mellin transforms of j_real over the negative and positive half lines
// against their Gamma closed forms. Points with Re s >= -1/4 check the
// negative side only.
VerificationReport verify_mellin_j(const ReprOrderReal& order, const std::vector<cplx>& s_grid,
                                   const QuadratureSpec& spec, double tol);
cplx mellin_j_negative_closed(cplx nu, cplx s);
cplx mellin_j_positive_closed(cplx nu, cplx s);
cplx mellin_j_negative(cplx nu, cplx s, const QuadratureSpec& spec);
cplx mellin_j_positive(cplx nu, cplx s, const QuadratureSpec& spec);

}  // namespace zm
