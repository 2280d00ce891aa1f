#pragma once

#include <map>

#include "zm/quadrature.hpp"
#include "zm/report.hpp"

namespace zm {

// phi = sum_p c_p phi_p in the principal series of order nu; phi_p has weight 2p.
struct PrincipalSeriesVector {
    cplx nu{};
    std::map<int, cplx> coefficients;

    double norm() const;
};

struct GroupCoords {
    double x = 0.0;
    double y = 1.0;
    double theta = 0.0;
};

// Whittaker-Jacquet value A_u phi_p(g), closed form via W_{sgn(u) p, nu}(4 pi |u| y).
cplx jacquet_phi(int p, cplx nu, double u, GroupCoords g = {});
// The defining Fourier integral over v, evaluated on rotated contours. Absolutely
// convergent for Re nu > 0; Abel-summable otherwise.
cplx jacquet_phi_integral(int p, cplx nu, double u, GroupCoords g, const QuadratureSpec& spec);
VerificationReport verify_jacquet_phi(int p, cplx nu, double u, GroupCoords g, const QuadratureSpec& spec, double tol);

// K phi(u) = A_{sgn u} phi(a[|u|])
cplx kirillov_transform(const PrincipalSeriesVector& phi, double u);
cplx kirillov_basis(int p, cplx nu, double u);

// <K phi_p, K phi_q> in L^2(R^x, (1/pi) du/|u|)
cplx kirillov_inner(int p, int q, cplx nu, const QuadratureSpec& spec);
double kirillov_norm2(const PrincipalSeriesVector& phi, const QuadratureSpec& spec);

// int_0^inf W_{lambda,nu}(u) W_{mu,nu}(u) du/u against its Gamma closed form
cplx whittaker_orthogonality_closed(cplx lambda, cplx mu, cplx nu);
VerificationReport verify_whittaker_orthogonality(cplx lambda, cplx mu, cplx nu, const QuadratureSpec& spec,
                                                  double tol = 1e-8);

// Gamma_p(s) = int_0^inf A_u phi_p(1) u^{s-nu-1} du by quadrature, Re s > |Re nu|.
cplx gamma_p(int p, cplx nu, cplx s, const QuadratureSpec& spec);
VerificationReport verify_jl_functional_equation(int p, cplx nu, cplx s, const QuadratureSpec& spec,
                                                 double tol = 1e-6);

// (-1)^p K phi_p(u) against int j_nu(uv) K phi_p(v) dv/|v|. The note carries
// the residual under the measure with an extra 1/pi.
VerificationReport verify_hankel_eigenrelation(int p, cplx nu, double u, const QuadratureSpec& spec,
                                               double tol = 1e-6);
VerificationReport verify_hankel_grid(const std::vector<int>& ps, const std::vector<cplx>& nus,
                                      const std::vector<double>& us, const QuadratureSpec& spec, double tol,
                                      Exec exec = Exec::parallel);

}  // namespace zm
