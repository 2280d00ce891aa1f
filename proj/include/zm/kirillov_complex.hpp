#pragma once

#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "zm/quadrature.hpp"
#include "zm/report.hpp"

namespace zm {

struct KHarmonicIndex {
    int l = 0;
    int p = 0;
    int q = 0;

    bool valid() const { return l >= 0 && std::abs(p) <= l && std::abs(q) <= l; }
    void validate() const;
};

// (p, nu) of a principal series representation of PSL2(C). The Casimir
// eigenvalues are derived on every access.
struct GaussianSpectralParameter {
    int p = 0;
    cplx nu{};

    cplx chi_plus() const { return ((double(p) - nu) * (double(p) - nu) - 1.0) / 8.0; }
    cplx chi_minus() const { return ((double(p) + nu) * (double(p) + nu) - 1.0) / 8.0; }
};

// sum over (l, q) of c_{l,q} phi_{l,q}
struct GaussPrincipalVector {
    GaussianSpectralParameter param;
    std::map<std::pair<int, int>, cplx> coefficients;  // (l, q) -> c

    void validate() const;
    double norm() const;
};

// Coefficient of X^{l-p} in (alpha X - conj beta)^{l-q} (beta X + conj alpha)^{l+q}.
cplx phi_lpq(const KHarmonicIndex& idx, cplx alpha, cplx beta);
// The same at Euler angles: k = h[e^{i phi/2}] v[i theta] h[e^{i psi/2}].
cplx phi_euler(const KHarmonicIndex& idx, double phi, double theta, double psi);
// L2(K) norm, Haar measure with int_K dk = 2 (see the Euler-angle test)
double phi_norm(const KHarmonicIndex& idx);

// v^l_q(r) from the one-dimensional Bessel integral; m = idx.q.
cplx v_lq(const KHarmonicIndex& idx, cplx nu, double r, const QuadratureSpec& spec);
// Closed form of v^l_l(r) through K_{p - nu}(2 pi r).
cplx v_closed(int l, int p, cplx nu, double r);
// v^l_q(r) from the planar Fourier integral over C. Slow; for cross-checks.
cplx v_lq_planar(const KHarmonicIndex& idx, cplx nu, double r, const QuadratureSpec& spec);

// Both second-order relations between v_q, v_{q+1} and v_{q-1} at r, with
// five-point differences of step r * 1e-3. Residuals are scaled by the
// largest term of the differential operator.
VerificationReport verify_radial_ode(const KHarmonicIndex& idx, cplx nu, double r, const QuadratureSpec& spec,
                                     double tol = 1e-5);

// int_0^inf v^l_q(r) conj(v^{l'}_q(r)) dr / r
cplx radial_inner(int l, int l_prime, int q, int p, cplx nu, const QuadratureSpec& spec);
// against delta_{l,l'} phi_norm(l, p, q)^2 / 4
VerificationReport orthogonality_check(int l, int l_prime, int q, int p, cplx nu, const QuadratureSpec& spec,
                                       double tol = 1e-7);

// Gamma_{l,q}(s) = int_0^inf v^l_q(r) r^{2s-2} dr by quadrature
cplx gamma_lq(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec);
// L_{l,q}(s) = int_0^inf v^{1+nu-2s} (1+v^2)^{-1-nu} Phi^l_{p,q}(k[v/sqrt(1+v^2), -1/sqrt(1+v^2)]) dv
cplx L_lq(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec);
// Gamma-factor form of Gamma_{l,q} through L_{l,q}
cplx gamma_lq_via_L(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec);
// Three checks: Gamma against its L form, L(s) against L_{l,-q}(1-s), and the
// local functional equation relating Gamma_{l,-q}(s) and Gamma_{l,q}(1-s).
VerificationReport verify_local_fe_complex(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec,
                                           double tol = 1e-6);

// K phi_{l,q}(u) = (u/|u|)^{-q} v^l_q(|u|) / phi_norm
cplx kirillov_complex_basis(int l, int q, int p, cplx nu, cplx u, const QuadratureSpec& spec);
cplx kirillov_complex_transform(const GaussPrincipalVector& phi, cplx u, const QuadratureSpec& spec);
// Gram matrix of K phi_{l,q} for the listed (l, q) in L2(C^x, (2/pi) du/|u|^2),
// angular part by the trapezoid rule, radial part by quadrature.
std::vector<std::vector<cplx>> kirillov_complex_gram(int p, cplx nu, const std::vector<std::pair<int, int>>& lq,
                                                     const QuadratureSpec& spec);

// Sum over |m| <= m_max of (-1)^max(|p|,|m|) K_{nu,p}(2 pi |z|, m) (z/|z|)^{2m}
cplx weyl_kernel_sum(int p, cplx nu, cplx z, int m_max, const QuadratureSpec& spec);

// (a) the radial identity
//   (-1)^{l-q} lambda^{-2} v^l_{-q}(lambda^2)
//     = 8 pi^2 (-1)^max(|p|,|q|) int_0^inf K_{nu,p}(2 pi lambda r, q) v^l_q(r^2) r dr
// at lambda = |u|; (b) the m-truncated kernel sum at z = u, against doubling
// m_max and against j_{p,nu}(u) / (4 pi |u|^2); (c) the full Weyl relation
//   (-1)^{l-q} K phi_{l,-q}(u^2) = int_{C^x} j_{p,nu}(u v) K phi_{l,q}(v^2) d^x v
// with d^x v = dv / |v|^2 (the note has the residual under (2/pi) d^x v).
struct WeylParts {
    bool radial = true;
    bool kernel = true;
    bool full = true;
};
VerificationReport verify_weyl_complex(int l, int q, int p, cplx nu, cplx u, const QuadratureSpec& spec,
                                       double tol = 1e-4, WeylParts parts = {});

}  // namespace zm
