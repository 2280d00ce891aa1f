#include <cmath>
#include <optional>
#include <vector>

#include "zm/dd.hpp"
#include "zm/specfun.hpp"

namespace zm {

namespace {

constexpr double series_radius = 25.0;
// Euler's constant to double-double.
const dd euler_dd{0.5772156649015329, -4.942915152430645e-18};

cdd cmul(cplx a, cplx b) { return cdd(a) * cdd(b); }

bool is_neg_int(cplx mu) { return mu.imag() == 0.0 && mu.real() < 0.0 && mu.real() == std::floor(mu.real()); }

// sum_k (sgn z^2/4)^k / (k! Gamma(mu+k+1)), double-double accumulation.
// mu must not be a negative integer.
cplx star_series(cplx mu, cplx z, int sgn) {
    cdd q = cmul(z, z) * dd(0.25 * sgn);
    cdd term(rgamma(mu + 1.0));
    cdd sum = term;
    double zabs = std::abs(z);
    int small = 0;
    for (int k = 1; k < 4000; ++k) {
        // the denominator is formed in double-double too: the terms reach
        // e^|z| times the sum, so a rounded k (mu + k) would cost digits
        cdd den = (cdd(mu) + cdd(double(k))) * dd(double(k));
        term = term * q / den;
        sum += term;
        double ta = term.abs_approx(), sa = sum.abs_approx();
        if (k > zabs && ta <= 1e-33 * sa) {
            if (++small >= 2) return sum.to_complex();
        } else {
            small = 0;
        }
        if (sa == 0.0 && ta == 0.0 && k > zabs + 5) return 0.0;
    }
    throw ConvergenceError("Bessel power series did not converge");
}

// Hankel asymptotic sums S1 = sum i^k a_k z^-k, S2 = sum (-i)^k a_k z^-k.
std::optional<std::pair<cplx, cplx>> hankel_sums(cplx mu, cplx z) {
    cplx m4 = 4.0 * mu * mu;
    cplx a = 1.0;
    cplx zi = 1.0 / z;
    cplx pw = 1.0;
    cplx s1 = 1.0, s2 = 1.0;
    cplx ik = 1.0;
    double prev = 1.0, peak = 1.0;
    for (int k = 1; k < 200; ++k) {
        a *= (m4 - double((2 * k - 1) * (2 * k - 1))) / (8.0 * k);
        pw *= zi;
        ik *= I;
        cplx t = a * pw;
        double ta = std::abs(t);
        if (ta == 0.0) return std::make_pair(s1, s2);
        if (ta > prev && k > 2 && prev < 1.0) return std::nullopt;  // diverging before convergence
        peak = std::max(peak, ta);
        s1 += ik * t;
        s2 += std::conj(ik) * t;
        double scale = std::min(std::abs(s1), std::abs(s2));
        scale = std::max(scale, 1e-300);
        if (ta < 1e-17 * scale) {
            if (peak > 1e3) return std::nullopt;  // too much cancellation
            return std::make_pair(s1, s2);
        }
        prev = ta;
    }
    return std::nullopt;
}

cplx hankel_prefactor(cplx z) { return std::sqrt(2.0 / (pi * z)); }

std::optional<std::pair<cplx, cplx>> hankel_asym(cplx mu, cplx z) {
    auto s = hankel_sums(mu, z);
    if (!s) return std::nullopt;
    cplx chi = z - mu * (pi / 2) - pi / 4;
    cplx pre = hankel_prefactor(z);
    return std::make_pair(pre * std::exp(I * chi) * s->first, pre * std::exp(-I * chi) * s->second);
}

// Taylor integration of z^2 w'' + z w' + (sigma z^2 - mu^2) w = 0 from z0 to z1
// along the straight segment. w, dw are updated in place.
void bessel_ode(cplx mu2, int sigma, cplx z0, cplx z1, cplx& w, cplx& dw) {
    std::vector<cplx> c(256);
    cplx z = z0;
    int guard = 0;
    while (std::abs(z1 - z) > 0.0) {
        if (++guard > 100000) throw ConvergenceError("Bessel ODE stepping did not terminate");
        double hmax = std::min(0.5 * std::abs(z), 2.0);
        cplx dir = z1 - z;
        double dist = std::abs(dir);
        cplx h = dist <= hmax ? dir : dir * (hmax / dist);
        c[0] = w;
        c[1] = dw;
        cplx z2 = z * z;
        cplx wn = c[0] + c[1] * h, dwn = c[1];
        cplx hp = h;  // h^(k+1) for k+2 terms
        double scale = std::abs(w) + std::abs(h) * std::abs(dw);
        int small = 0;
        std::size_t k = 0;
        for (; k + 2 < c.size(); ++k) {
            cplx acc = (2.0 * k + 1.0) * z * double(k + 1) * c[k + 1] + (double(k * k) + double(sigma) * z2 - mu2) * c[k];
            if (k >= 1) acc += 2.0 * double(sigma) * z * c[k - 1];
            if (k >= 2) acc += double(sigma) * c[k - 2];
            c[k + 2] = -acc / (z2 * double((k + 2) * (k + 1)));
            cplx t = c[k + 2] * hp * h;
            wn += t;
            dwn += double(k + 2) * c[k + 2] * hp;
            hp *= h;
            if (std::abs(t) < 1e-18 * scale && k > 6) {
                if (++small >= 3) break;
            } else {
                small = 0;
            }
        }
        if (k + 2 >= c.size()) throw ConvergenceError("Bessel ODE Taylor series did not converge");
        w = wn;
        dw = dwn;
        z += h;
        if (std::abs(z1 - z) < 1e-14 * std::abs(z1)) break;
    }
}

// J_mu(w) for Re w >= 0, |w| > series_radius.
cplx bessel_j_far(cplx mu, cplx w) {
    if (auto h = hankel_asym(mu, w)) return 0.5 * (h->first + h->second);
    cplx z0 = w * (series_radius / std::abs(w));
    cplx half = 0.5 * z0;
    cplx lg = std::log(half);
    cplx j = std::exp(mu * lg) * star_series(mu, z0, -1);
    cplx j1 = std::exp((mu + 1.0) * lg) * star_series(mu + 1.0, z0, -1);
    cplx dj = mu / z0 * j - j1;
    bessel_ode(mu * mu, 1, z0, w, j, dj);
    return j;
}

cplx jstar_nonneg(cplx mu, cplx z) {
    double az = std::abs(z);
    if (az <= series_radius) return star_series(mu, z, -1);
    cplx w = z.real() >= 0.0 ? z : -z;
    return bessel_j_far(mu, w) * std::exp(-mu * std::log(0.5 * w));
}

// Y_n for integer n >= 0 by the logarithmic series, double-double inside.
cplx y_int_series(int n, cplx z) {
    cplx half = 0.5 * z;
    cdd q = cmul(z, z) * dd(-0.25);
    // finite sum: sum_{k<n} (n-k-1)!/k! (z/2)^(2k-n)
    cdd fin(0.0);
    if (n > 0) {
        cplx hinv = 1.0 / half;
        cdd hpow(std::pow(hinv, n));
        cdd h2 = cmul(half, half);
        dd fac(1.0);
        for (int j = 2; j <= n - 1; ++j) fac *= dd(double(j));  // (n-1)!
        cdd term = cdd(hpow) * fac;
        fin = term;
        for (int k = 1; k < n; ++k) {
            // ratio: (n-k-1)!/k! over (n-k)!/(k-1)! = 1/((n-k) k)
            term = term * h2 / dd(double((n - k) * k));
            fin += term;
        }
    }
    // infinite sum with digamma coefficients
    dd hk(0.0), hnk(0.0);
    for (int j = 1; j <= n; ++j) hnk += dd(1.0) / dd(double(j));
    dd nfac(1.0);
    for (int j = 2; j <= n; ++j) nfac *= dd(double(j));
    cdd base = cdd(std::pow(half, n)) / nfac;  // (z/2)^n / (0! n!)
    cdd term = base;
    cdd jsum = term;
    cdd psum = term * (hk + hnk - euler_dd - euler_dd);
    double az = std::abs(z);
    int small = 0;
    for (int k = 1; k < 4000; ++k) {
        term = term * q / dd(double(k) * double(n + k));
        hk += dd(1.0) / dd(double(k));
        hnk += dd(1.0) / dd(double(n + k));
        jsum += term;
        cdd pt = term * (hk + hnk - euler_dd - euler_dd);
        psum += pt;
        if (k > az && pt.abs_approx() <= 1e-33 * psum.abs_approx()) {
            if (++small >= 2) break;
        } else {
            small = 0;
        }
    }
    cplx lg = std::log(half);
    cdd r = jsum * cdd(lg) * dd(2.0) - fin - psum;
    return r.to_complex() / pi;
}

cplx y_int(int n, cplx z) {
    int an = std::abs(n);
    double sgn = (n < 0 && (an % 2)) ? -1.0 : 1.0;
    cplx r;
    if (std::abs(z) <= series_radius) {
        r = y_int_series(an, z);
    } else if (auto h = hankel_asym(double(an), z)) {
        r = (h->first - h->second) / (2.0 * I);
    } else {
        cplx z0 = z * (series_radius / std::abs(z));
        cplx y = y_int_series(an, z0);
        cplx y1 = y_int_series(an + 1, z0);
        cplx dy = double(an) / z0 * y - y1;
        bessel_ode(double(an) * an, 1, z0, z, y, dy);
        r = y;
    }
    return sgn * r;
}

cplx k_integral(cplx mu, double x) {
    // K = int_0^inf exp(-x cosh t) cosh(mu t) dt, scaled by exp(x).
    auto f = [&](double t) {
        double c = std::cosh(t) - 1.0;
        if (t < 1e-3) c = 0.5 * t * t * (1.0 + t * t / 12.0);
        double e = -x * c;
        return 0.5 * (std::exp(e + mu * t) + std::exp(e - mu * t));
    };
    double amu = std::fabs(mu.real());
    // Find where the integrand envelope is negligible.
    double tmax = 0.5;
    double peak = 0.0;
    for (double t = 0.0; t < 800.0; t += 0.25) {
        double c = std::cosh(t) - 1.0;
        double env = -x * c + amu * t;
        peak = std::max(peak, env);
        if (env < peak - 50.0 && t > 0.5) {
            tmax = t;
            break;
        }
        tmax = t;
    }
    double h = std::min(0.25, tmax / 8);
    double mass = 0.0;
    auto trap = [&](double step) {
        cdd s(0.5 * f(0.0));
        mass = 0.5 * std::abs(f(0.0));
        int n = static_cast<int>(std::ceil(tmax / step));
        for (int j = 1; j <= n; ++j) {
            cplx v = f(j * step);
            s += cdd(v);
            mass += std::abs(v);
        }
        mass *= step;
        return s.to_complex() * step;
    };
    cplx prev = trap(h);
    for (int level = 0; level < 10; ++level) {
        h *= 0.5;
        cplx cur = trap(h);
        double d = std::abs(cur - prev);
        if (level >= 1 && (d <= 1e-15 * std::abs(cur) || d <= 4e-16 * mass)) return cur * std::exp(-x);
        prev = cur;
    }
    return prev * std::exp(-x);
}

}  // namespace

cplx bessel_jstar(cplx mu, cplx z) {
    if (is_neg_int(mu)) {
        int n = static_cast<int>(-mu.real());
        double sgn = (n % 2) ? -1.0 : 1.0;
        return sgn * std::pow(0.5 * z, 2 * n) * jstar_nonneg(double(n), z);
    }
    return jstar_nonneg(mu, z);
}

cplx bessel_istar(cplx mu, cplx z) { return bessel_jstar(mu, I * z); }

cplx bessel_j(cplx mu, cplx z) {
    if (z == 0.0) {
        if (mu == 0.0) return 1.0;
        if (mu.real() > 0.0 || is_neg_int(mu) || is_integer(mu)) return 0.0;
        throw std::domain_error("bessel_j: singular at z = 0");
    }
    if (is_neg_int(mu)) {
        int n = static_cast<int>(-mu.real());
        return ((n % 2) ? -1.0 : 1.0) * bessel_j(double(n), z);
    }
    if (std::abs(z) > series_radius && z.real() >= 0.0) return bessel_j_far(mu, z);
    return std::exp(mu * std::log(0.5 * z)) * bessel_jstar(mu, z);
}

cplx bessel_y(cplx mu, cplx z) {
    if (z == 0.0) throw std::domain_error("bessel_y: singular at z = 0");
    if (is_integer(mu)) return y_int(static_cast<int>(mu.real()), z);
    cplx s = std::sin(pi * mu), c = std::cos(pi * mu);
    if (std::abs(z) > series_radius && z.real() >= 0.0) {
        if (auto h = hankel_asym(mu, z)) return (h->first - h->second) / (2.0 * I);
    }
    return (bessel_j(mu, z) * c - bessel_j(-mu, z)) / s;
}

cplx bessel_i(cplx mu, cplx z) {
    if (z == 0.0) {
        if (mu == 0.0) return 1.0;
        if (mu.real() > 0.0 || is_integer(mu)) return 0.0;
        throw std::domain_error("bessel_i: singular at z = 0");
    }
    if (is_neg_int(mu)) return bessel_i(-mu, z);
    return std::exp(mu * std::log(0.5 * z)) * bessel_istar(mu, z);
}

cplx bessel_k(cplx mu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
    double kappa = std::fabs(mu.imag());
    double x0 = std::max(12.0, pi * kappa / 2 + 4.0);
    if (kappa <= 2.0 || x >= x0) return k_integral(mu, x);
    if (x <= 2.0) {
        cplx lg = std::log(0.5 * x);
        cplx ip = std::exp(mu * lg) * star_series(mu, x, 1);
        cplx im = std::exp(-mu * lg) * star_series(-mu, x, 1);
        return (pi / 2) * (im - ip) / std::sin(mu * pi);
    }
    cplx k = k_integral(mu, x0);
    cplx dk = -0.5 * (k_integral(mu - 1.0, x0) + k_integral(mu + 1.0, x0));
    bessel_ode(mu * mu, -1, x0, x, k, dk);
    return k;
}

namespace {

// H1 (which = 1) or H2 (which = 2) in the half plane where it is recessive.
// Combinations of J there cancel like exp(-2|Im z|), so start from the
// asymptotic series far out along the same ray and integrate the ODE inward,
// the direction in which the wanted solution grows.
cplx hankel_recessive(int which, cplx mu, cplx z) {
    double r = std::max(series_radius, 0.5 * std::norm(mu) + 12.0);
    for (int tries = 0; tries < 6; ++tries, r *= 2.0) {
        cplx zf = z * (r / std::abs(z));
        auto h0 = hankel_asym(mu, zf);
        auto h1 = hankel_asym(mu - 1.0, zf);
        if (!h0 || !h1) continue;
        cplx w = which == 1 ? h0->first : h0->second;
        cplx wm = which == 1 ? h1->first : h1->second;
        cplx dw = wm - mu / zf * w;
        bessel_ode(mu * mu, 1, zf, z, w, dw);
        return w;
    }
    throw ConvergenceError("Hankel function: no usable asymptotic start");
}

cplx hankel_from_j(int which, cplx mu, cplx z) {
    double sg = which == 1 ? 1.0 : -1.0;
    if (is_integer(mu)) return bessel_j(mu, z) + sg * I * bessel_y(mu, z);
    return (bessel_j(-mu, z) - std::exp(-sg * I * pi * mu) * bessel_j(mu, z)) / (sg * I * std::sin(pi * mu));
}

cplx hankel_any(int which, cplx mu, cplx z) {
    if (z == 0.0) throw std::domain_error("hankel: singular at z = 0");
    if (std::abs(z) > series_radius)
        if (auto h = hankel_asym(mu, z)) return which == 1 ? h->first : h->second;
    double im = which == 1 ? z.imag() : -z.imag();
    if (im > 1.0 && z.real() > -0.5 * std::abs(z)) return hankel_recessive(which, mu, z);
    return hankel_from_j(which, mu, z);
}

}  // namespace

cplx hankel1(cplx mu, cplx z) { return hankel_any(1, mu, z); }

cplx hankel2(cplx mu, cplx z) { return hankel_any(2, mu, z); }

cplx bessel(BesselKind kind, cplx order, double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel: argument must be a nonnegative real");
    if (x == 0.0 && !(kind == BesselKind::J && order.real() >= 0.0))
        throw std::domain_error("bessel: x = 0 only allowed for J with Re(order) >= 0");
    switch (kind) {
        case BesselKind::J:
            return bessel_j(order, x);
        case BesselKind::Y:
            return bessel_y(order, x);
        case BesselKind::I:
            return bessel_i(order, x);
        case BesselKind::K:
            return bessel_k(order, x);
    }
    return 0.0;
}

}  // namespace zm
