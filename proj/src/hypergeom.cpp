#include <algorithm>
#include <cmath>
#include <vector>

#include "zm/dd.hpp"
#include "zm/quadrature.hpp"
#include "zm/specfun.hpp"

namespace zm {

namespace {

// exp(y/2) W_{kappa,mu}(y) from the Laplace-type integral, needs
// Re(1/2 + mu - kappa) > 0. After t = s/y:
//   y^kappa / Gamma(a) * int_0^inf e^-s s^(a-1) (1 + s/y)^(mu+kappa-1/2) ds
cplx w_scaled_integral(cplx kappa, cplx mu, double y) {
    cplx a = 0.5 + mu - kappa;
    cplx b = mu + kappa - 0.5;
    QuadratureSpec qs;
    qs.abs_tol = 1e-300;
    qs.rel_tol = 1e-14;
    if (y >= 1.0) {
        auto f = [&](double s) { return std::exp(-s + (a - 1.0) * std::log(s) + b * std::log1p(s / y)); };
        IntegralResult r = double_exponential(f, {0.0, INFINITY}, qs);
        return std::exp(kappa * std::log(y)) * rgamma(a) * r.value;
    }
    // small y: (1 + s/y)^b overflows long before e^-s wins, so pull out y^-b
    auto f = [&](double s) { return std::exp(-s + (a - 1.0) * std::log(s) + b * std::log(s + y)); };
    IntegralResult r = double_exponential(f, {0.0, INFINITY}, qs);
    return std::exp((kappa - b) * std::log(y)) * rgamma(a) * r.value;
}

// exp(y/2) W_{kappa,mu}(y) for tiny y through the two M solutions:
// W = G(-2mu)/G(1/2-mu-kappa) M_{kappa,mu} + G(2mu)/G(1/2+mu-kappa) M_{kappa,-mu}.
// Only used when 2 mu is well away from an integer.
cplx w_scaled_small(cplx kappa, cplx mu, double y, double* cancellation) {
    auto kummer = [&](cplx a, cplx b) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 0; k < 200; ++k) {
            term *= (a + double(k)) / ((b + double(k)) * double(k + 1)) * y;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    };
    double ly = std::log(y);
    cplx m1 = std::exp((0.5 + mu) * ly) * kummer(0.5 + mu - kappa, 1.0 + 2.0 * mu);
    cplx m2 = std::exp((0.5 - mu) * ly) * kummer(0.5 - mu - kappa, 1.0 - 2.0 * mu);
    cplx t1 = gamma(-2.0 * mu) * rgamma(0.5 - mu - kappa) * m1;
    cplx t2 = gamma(2.0 * mu) * rgamma(0.5 + mu - kappa) * m2;
    if (cancellation) *cancellation = (std::abs(t1) + std::abs(t2)) / std::abs(t1 + t2);
    return t1 + t2;
}

cplx hyp_series(cplx a, cplx b, cplx c, cplx z) {
    cdd term(1.0), sum(1.0);
    cdd zz(z);
    int small = 0;
    for (int k = 0; k < 20000; ++k) {
        cplx ratio = (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1));
        if (ratio == 0.0) return sum.to_complex();
        term = term * cdd(ratio) * zz;
        sum += term;
        if (term.abs_approx() <= 1e-20 * sum.abs_approx()) {
            if (++small >= 2) return sum.to_complex();
        } else {
            small = 0;
        }
    }
    throw ConvergenceError("hyp2f1 series did not converge");
}

// Continue (F, F') from z0 to z1 along the segment with Taylor steps of the
// hypergeometric equation. Each step stays within half the distance to the
// singular points 0 and 1.
void hyp_ode(cplx a, cplx b, cplx c, cplx z0, cplx z1, cplx& f, cplx& df) {
    std::vector<cplx> co(400);
    cplx z = z0;
    cplx apb1 = a + b + 1.0, ab = a * b;
    int guard = 0;
    while (std::abs(z1 - z) > 1e-15 * std::abs(z1)) {
        if (++guard > 100000) throw ConvergenceError("hyp2f1 continuation did not terminate");
        double hmax = 0.5 * std::min(std::abs(z), std::abs(1.0 - z));
        cplx dir = z1 - z;
        double dist = std::abs(dir);
        cplx h = dist <= hmax ? dir : dir * (hmax / dist);
        co[0] = f;
        co[1] = df;
        cplx den = z * (1.0 - z);
        cplx lin = c - apb1 * z, slope = 1.0 - 2.0 * z;
        cplx fn = co[0] + co[1] * h, dfn = co[1];
        cplx hp = h;
        double scale = std::abs(f) + std::abs(h) * std::abs(df);
        int small = 0;
        std::size_t k = 0;
        for (; k + 2 < co.size(); ++k) {
            double kd = double(k);
            cplx num = (slope * kd + lin) * (kd + 1.0) * co[k + 1] - (kd * (kd - 1.0) + apb1 * kd + ab) * co[k];
            co[k + 2] = -num / (den * ((kd + 2.0) * (kd + 1.0)));
            cplx t = co[k + 2] * hp * h;
            fn += t;
            dfn += (kd + 2.0) * co[k + 2] * hp;
            hp *= h;
            if (std::abs(t) < 1e-18 * scale && k > 4) {
                if (++small >= 3) break;
            } else {
                small = 0;
            }
        }
        if (k + 2 >= co.size()) throw ConvergenceError("hyp2f1 Taylor step did not converge");
        f = fn;
        df = dfn;
        z += h;
    }
}

// |z| large: the connection to 1/z. Generic a - b: two series in 1/z.
// a = b: the logarithmic case. Returns false when neither applies cleanly.
bool hyp_inverse(cplx a, cplx b, cplx c, cplx z, cplx& out) {
    cplx lmz = std::log(-z), zi = 1.0 / z;
    cplx d = a - b;
    if (std::abs(d - std::round(d.real())) > 0.05) {
        auto piece = [&](cplx a1, cplx b1) {
            // Gamma(c) Gamma(b1 - a1) / (Gamma(b1) Gamma(c - a1)) (-z)^-a1 F(a1, a1 - c + 1; a1 - b1 + 1; 1/z)
            cplx pre = std::exp(loggamma(c) + loggamma(b1 - a1) - loggamma(b1) - loggamma(c - a1) - a1 * lmz);
            return pre * hyp_series(a1, a1 - c + 1.0, a1 - b1 + 1.0, zi);
        };
        if (is_nonpositive_integer(a) || is_nonpositive_integer(b) || is_nonpositive_integer(c - a) ||
            is_nonpositive_integer(c - b))
            return false;
        out = piece(a, b) + piece(b, a);
        return true;
    }
    if (d != 0.0) return false;
    // sum_k (a)_k (1-c+a)_k / k!^2 z^-k [log(-z) + 2 psi(k+1) - psi(a+k) - psi(c-a-k)]
    for (int k = 0; k < 60; ++k)
        if (is_nonpositive_integer(c - a - double(k)) || is_nonpositive_integer(a + double(k))) return false;
    cplx coef = 1.0, sum = 0.0, zk = 1.0;
    cplx psi_a = digamma(a), psi_ca = digamma(c - a);
    double psi1 = -euler_gamma;
    int small = 0;
    for (int k = 0; k < 400; ++k) {
        cplx term = coef * zk * (lmz + 2.0 * psi1 - psi_a - psi_ca);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small >= 2) break;
        } else {
            small = 0;
        }
        double kd = double(k);
        coef *= (a + kd) * (1.0 - c + a + kd) / ((kd + 1.0) * (kd + 1.0));
        zk *= zi;
        psi1 += 1.0 / (kd + 1.0);
        psi_a += 1.0 / (a + kd);
        psi_ca -= 1.0 / (c - a - kd - 1.0);  // psi(x - 1) = psi(x) - 1/(x - 1)
    }
    out = std::exp(loggamma(c) - a * lmz) * rgamma(a) * rgamma(c - a) * sum;
    return true;
}

}  // namespace

cplx whittaker_w(cplx kappa, cplx mu, double y, bool* underflow) {
    if (!(y > 0.0) || !std::isfinite(y)) throw std::domain_error("whittaker_w: y must be positive");
    if (underflow) *underflow = false;
    if (mu.real() < 0.0) mu = -mu;  // W is even in mu
    double ra = 0.5 + mu.real() - kappa.real();
    auto by_integral = [&]() -> cplx {
        if (ra > 0.0) return w_scaled_integral(kappa, mu, y);
        int n = static_cast<int>(std::ceil(-ra)) + 1;
        cplx k0 = kappa - double(n);
        cplx wm = w_scaled_integral(k0 - 1.0, mu, y);
        cplx w0 = w_scaled_integral(k0, mu, y);
        cplx m2 = mu * mu;
        for (int j = 0; j < n; ++j) {
            cplx k = k0 + double(j);
            cplx wp = (y - 2.0 * k) * w0 - ((k - 0.5) * (k - 0.5) - m2) * wm;
            wm = w0;
            w0 = wp;
        }
        return w0;
    };
    cplx scaled;
    cplx two_mu = 2.0 * mu;
    if (y <= 2.0 && std::abs(two_mu - std::round(two_mu.real())) > 0.05) {
        double cancel = 0.0;
        scaled = w_scaled_small(kappa, mu, y, &cancel);
        // heavy cancellation between the M terms: prefer the integral, but
        // near a zero of an oscillating W the integral is no better and may
        // not converge at all
        if (cancel > 100.0) {
            try {
                scaled = by_integral();
            } catch (const ConvergenceError&) {
            }
        }
    } else {
        scaled = by_integral();
    }
    double lg = std::log(std::abs(scaled)) - 0.5 * y;
    if (scaled == 0.0 || lg < -744.0) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    return scaled * std::exp(-0.5 * y);
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
    if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a nonpositive integer");
    if (z.imag() == 0.0 && z.real() >= 1.0) throw std::domain_error("hyp2f1: argument on the branch cut [1, inf)");
    if (z == 0.0) return 1.0;
    if (std::abs(z) <= 0.75) return hyp_series(a, b, c, z);
    cplx w = z / (z - 1.0);
    if (std::abs(w) <= 0.75) return std::exp(-a * std::log(1.0 - z)) * hyp_series(a, c - b, c, w);
    // the 1/z series start without growth only once |z| dominates the Pochhammer ratios
    double big = 4.0 * std::max({1.0, std::abs(a) * std::abs(1.0 - c + a), std::abs(b) * std::abs(1.0 - c + b)});
    if (std::abs(z) >= big) {
        cplx v;
        if (hyp_inverse(a, b, c, z, v)) return v;
    }
    // Pfaff maps Re z < 1/2 into the unit disk; continue in whichever variable
    // is smaller.
    cplx aa = a, bb = b, pre = 1.0, t = z;
    if (std::abs(w) < std::abs(z)) {
        bb = c - b;
        pre = std::exp(-a * std::log(1.0 - z));
        t = w;
    }
    cplx t0 = t * (0.5 / std::abs(t));
    cplx f = hyp_series(aa, bb, c, t0);
    cplx df = aa * bb / c * hyp_series(aa + 1.0, bb + 1.0, c + 1.0, t0);
    hyp_ode(aa, bb, c, t0, t, f, df);
    return pre * f;
}

}  // namespace zm
