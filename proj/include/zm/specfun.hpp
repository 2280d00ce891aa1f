#pragma once

#include "zm/common.hpp"

namespace zm {

// Gamma family. Principal branch; exact poles raise PoleError, results
// beyond the double range raise OverflowError.
cplx gamma(cplx z);
cplx rgamma(cplx z);  // 1/Gamma, entire
cplx loggamma(cplx z);
cplx digamma(cplx z);

enum class BesselKind { J, Y, I, K };

// Classical Bessel functions of complex order at positive real argument.
cplx bessel(BesselKind kind, cplx order, double x);

// Complex-argument versions, principal branches (cut along the negative axis).
cplx bessel_j(cplx mu, cplx z);
cplx bessel_y(cplx mu, cplx z);
cplx bessel_i(cplx mu, cplx z);
cplx bessel_k(cplx mu, double x);
cplx hankel1(cplx mu, cplx z);
cplx hankel2(cplx mu, cplx z);

// J_mu(z) (z/2)^(-mu): entire in z and mu, even in z.
cplx bessel_jstar(cplx mu, cplx z);
// I_mu(z) (z/2)^(-mu)
cplx bessel_istar(cplx mu, cplx z);

// Whittaker W_{kappa,mu}(y), y > 0. When the value underflows the result is an
// exact zero and *underflow (if given) is set.
cplx whittaker_w(cplx kappa, cplx mu, double y, bool* underflow = nullptr);

// Gauss 2F1(a, b; c; z) for z off [1, inf).
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);

}  // namespace zm
