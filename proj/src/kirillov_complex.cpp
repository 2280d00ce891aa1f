#include "zm/kirillov_complex.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "zm/bessel_repr.hpp"
#include "zm/specfun.hpp"

namespace zm {

namespace {

cplx cpow(cplx base, cplx e) { return std::exp(e * std::log(base)); }

cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

double sign_of(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// i^n for any integer n
cplx i_pow(int n) {
    static const cplx tab[4] = {1.0, I, -1.0, -I};
    return tab[((n % 4) + 4) % 4];
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * double(n - k + j) / double(j);
    return std::round(r);
}

// Phi(k[a, -1]) as a polynomial in a, lowest power first; by homogeneity
// Phi(k[v/sqrt(1+v^2), -1/sqrt(1+v^2)]) = (1+v^2)^{-l} P(v).
std::vector<double> radial_poly(const KHarmonicIndex& idx) {
    const int l = idx.l, p = idx.p, q = idx.q;
    std::vector<double> c(2 * l + 1, 0.0);
    for (int i = 0; i <= l - q; ++i) {
        int j = l - p - i;
        if (j < 0 || j > l + q) continue;
        c[i + l + q - j] += binom(l - q, i) * binom(l + q, j) * sign_of(j);
    }
    return c;
}

cplx poly_eval(const std::vector<double>& c, cplx v) {
    cplx r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * v + *it;
    return r;
}

// (1 + v^2)^{-e}, analytic for Re v > 0 and on [0, inf)
cplx one_plus_sq_pow(cplx v, cplx e) { return std::exp(-e * (std::log(v - I) + std::log(v + I))); }

// The v-integrands are O(1) while v itself can be tiny; a few ulps of the
// integrand is as far as the absolute tolerance can go.
QuadratureSpec inner_spec(const QuadratureSpec& spec) {
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 4e-15);
    qs.rel_tol = std::min(spec.rel_tol, 1e-13);
    return qs;
}

// GK panels of width w from a until four in a row are below eps * |total|
template <class F>
cplx panel_sum(F&& f, double a, double w, double eps, const QuadratureSpec& qs) {
    cplx total = 0.0;
    int quiet = 0;
    QuadratureSpec ps = qs;
    for (int k = 0; k < 4000; ++k) {
        // a panel that nearly cancels only needs accuracy relative to the sum so far
        ps.abs_tol = std::max(qs.abs_tol, 1e-2 * qs.rel_tol * std::abs(total));
        cplx part = gauss_kronrod(f, {a + k * w, a + (k + 1) * w}, ps).value;
        total += part;
        if (std::abs(part) <= eps * std::abs(total) || std::abs(part) < 1e-300) {
            if (++quiet >= 4) return total;
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError("panel sum: integrand does not decay");
}

// Every v^l_q is a finite sum of r^k K_mu(2 pi r) terms, below e^{-70} of its
// size at r = 1 beyond this radius; quadrature noise there is all that is left.
constexpr double r_cut = 12.0;

// int_0^inf f(r) dr for f that is a damped wave in log r near 0 and decays
// like e^{-2 pi r} or faster: (0, 1] in x = -log r, then unit panels up to r_cut.
template <class F>
cplx radial_half_line(F&& f, double eps, const QuadratureSpec& qs) {
    auto g = [&](double x) -> cplx {
        double r = std::exp(-x);
        return r == 0.0 ? cplx(0.0) : f(r) * r;
    };
    cplx head = panel_sum(g, 0.0, 1.0, eps, qs);
    auto h = [&](double r) -> cplx { return r > r_cut ? cplx(0.0) : f(r); };
    return head + panel_sum(h, 1.0, 1.0, eps, qs);
}

json lq_params(int l, int q, int p, cplx nu) { return json{{"l", l}, {"q", q}, {"p", p}, {"nu", to_json(nu)}}; }

}  // namespace

void KHarmonicIndex::validate() const {
    if (!valid())
        throw std::invalid_argument("KHarmonicIndex: needs |p| <= l and |q| <= l (l=" + std::to_string(l) +
                                    ", p=" + std::to_string(p) + ", q=" + std::to_string(q) + ")");
}

void GaussPrincipalVector::validate() const {
    for (const auto& [lq, c] : coefficients) KHarmonicIndex{lq.first, param.p, lq.second}.validate();
}

double GaussPrincipalVector::norm() const {
    double s = 0.0;
    for (const auto& [lq, c] : coefficients) s += std::norm(c);
    return std::sqrt(s);
}

cplx phi_lpq(const KHarmonicIndex& idx, cplx alpha, cplx beta) {
    idx.validate();
    double unit = std::norm(alpha) + std::norm(beta);
    if (std::abs(unit - 1.0) > 1e-12) throw std::domain_error("phi_lpq: needs |alpha|^2 + |beta|^2 = 1");
    const int l = idx.l, p = idx.p, q = idx.q;
    const cplx mb = -std::conj(beta), ca = std::conj(alpha);
    cplx total = 0.0;
    for (int i = 0; i <= l - q; ++i) {
        int j = l - p - i;
        if (j < 0 || j > l + q) continue;
        total += binom(l - q, i) * binom(l + q, j) * ipow(alpha, i) * ipow(mb, l - q - i) * ipow(beta, j) *
                 ipow(ca, l + q - j);
    }
    return total;
}

cplx phi_euler(const KHarmonicIndex& idx, double phi, double theta, double psi) {
    cplx alpha = std::polar(std::cos(theta / 2.0), (phi + psi) / 2.0);
    cplx beta = I * std::polar(std::sin(theta / 2.0), (phi - psi) / 2.0);
    // renormalise the rounding in cos^2 + sin^2
    double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    return phi_lpq(idx, alpha / n, beta / n);
}

double phi_norm(const KHarmonicIndex& idx) {
    idx.validate();
    return std::sqrt(binom(2 * idx.l, idx.l - idx.p) / binom(2 * idx.l, idx.l - idx.q) / (idx.l + 0.5));
}

cplx v_lq(const KHarmonicIndex& idx, cplx nu, double r, const QuadratureSpec& spec) {
    idx.validate();
    if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("v_lq: r must be positive");
    const int n = idx.p + idx.q;
    const double order = std::abs(n);
    const double jsign = n < 0 ? sign_of(n) : 1.0;
    const std::vector<double> poly = radial_poly(idx);
    const cplx expo = 1.0 + nu + double(idx.l);
    auto amp = [&](cplx v) { return v * poly_eval(poly, v) * one_plus_sq_pow(v, expo); };
    const double X = 2.0 * pi * r;
    const double a = std::max(2.0, 3.0 / X);
    QuadratureSpec qs = inner_spec(spec);
    try {
    IntegralResult res = gauss_kronrod(
        [&](double v) { return bessel(BesselKind::J, order, X * v) * amp(v); }, {0.0, 2.0}, qs);
    if (a > 2.0) {
        // small r: the integrand lives out to v ~ 1/r, smooth in log v but
        // oscillating like v^{-2i Im nu}; rounding over the long range sets
        // the floor of the absolute tolerance
        auto g = [&](double t) {
            double v = std::exp(t);
            return bessel(BesselKind::J, order, X * v) * amp(v) * v;
        };
        const double t0 = std::log(2.0), t1 = std::log(a);
        QuadratureSpec ql = qs;
        double scale = 0.0;
        for (int k = 0; k <= 8; ++k) scale = std::max(scale, std::abs(g(t0 + (t1 - t0) * k / 8.0)));
        ql.abs_tol = std::max(qs.abs_tol, 1e-15 * (t1 - t0) * scale);
        res += gauss_kronrod(g, {t0, t1}, ql);
    }
    std::array<Piece, 2> pieces{
        Piece{[&](cplx v) { return 0.5 * hankel1(order, X * v) * amp(v); }, +1},
        Piece{[&](cplx v) { return 0.5 * hankel2(order, X * v) * amp(v); }, -1},
    };
    res += integrate_rotated(pieces, a, qs);
    return 2.0 * pi * jsign * i_pow(-n) * cpow(r, 1.0 - nu) * res.value;
    } catch (const ConvergenceError& e) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "v_lq at r = %.17g: ", r);
        throw ConvergenceError(buf + std::string(e.what()));
    }
}

cplx v_closed(int l, int p, cplx nu, double r) {
    KHarmonicIndex{l, p, l}.validate();
    if (!(r > 0.0)) throw std::domain_error("v_closed: r must be positive");
    cplx pre = 2.0 * sign_of(l - p) * i_pow(-l - p) * pi * binom(2 * l, l - p);
    return pre * cpow(r, 1.0 - nu) * cpow(pi * r, double(l) + nu) * rgamma(double(l) + nu + 1.0) *
           bessel_k(double(p) - nu, 2.0 * pi * r);
}

cplx v_lq_planar(const KHarmonicIndex& idx, cplx nu, double r, const QuadratureSpec& spec) {
    idx.validate();
    if (!(r > 0.0)) throw std::domain_error("v_lq_planar: r must be positive");
    // v = rho e^{i theta}; the angle by the trapezoid rule (periodic, entire),
    // with enough nodes for exp(-2 pi i r rho cos theta)
    auto angular = [&](double rho) -> cplx {
        if (rho == 0.0) return 0.0;
        double w = 1.0 / std::sqrt(1.0 + rho * rho);
        int nodes = 64 + 2 * int(std::ceil(2.0 * pi * r * rho));
        cplx acc = 0.0;
        for (int k = 0; k < nodes; ++k) {
            double th = 2.0 * pi * k / nodes;
            cplx alpha = std::polar(rho * w, -th);  // conj(v) / sqrt(1 + |v|^2)
            acc += std::exp(-2.0 * pi * I * r * rho * std::cos(th)) * phi_lpq(idx, alpha, -w);
        }
        return acc * (2.0 * pi / nodes) * rho * one_plus_sq_pow(rho, 1.0 + nu);
    };
    QuadratureSpec qs = inner_spec(spec);
    const double a = 4.0;
    IntegralResult res = gauss_kronrod(angular, {0.0, a}, qs);
    res += integrate_oscillatory(angular, a, 1.0 / (2.0 * r), spec);
    return cpow(r, 1.0 - nu) * res.value;
}

VerificationReport verify_radial_ode(const KHarmonicIndex& idx, cplx nu, double r, const QuadratureSpec& spec,
                                     double tol) {
    idx.validate();
    if (!(r > 0.0)) throw std::domain_error("verify_radial_ode: r must be positive");
    const int l = idx.l, p = idx.p, q = idx.q;
    GaussianSpectralParameter par{p, nu};
    const double h = r * 1e-3;
    std::array<cplx, 5> f;
    for (int k = -2; k <= 2; ++k) f[k + 2] = v_lq(idx, nu, r + k * h, spec);
    cplx d1 = (-f[4] + 8.0 * f[3] - 8.0 * f[1] + f[0]) / (12.0 * h);
    cplx d2 = (-f[4] + 16.0 * f[3] - 30.0 * f[2] + 16.0 * f[1] - f[0]) / (12.0 * h * h);
    const cplx v0 = f[2];
    auto neighbour = [&](int qq) -> cplx {
        if (std::abs(qq) > l) return 0.0;
        return v_lq({l, p, qq}, nu, r, spec);
    };
    VerificationReport rep;
    rep.suite = "radial_ode";
    json params = lq_params(l, q, p, nu);
    params["r"] = r;
    {
        // D_q^+ v_q = -4 pi i (l - q) v_{q+1} / r
        double c1 = 2.0 * q + 1.0;
        cplx c0 = double(q * q + 2 * q) - 4.0 * pi * pi * r * r - 8.0 * par.chi_plus();
        cplx lhs = d2 - c1 / r * d1 + c0 / (r * r) * v0;
        cplx rhs = -4.0 * pi * I * double(l - q) / r * neighbour(q + 1);
        double scale = std::abs(d2) + std::abs(c1 / r * d1) + std::abs(c0 / (r * r) * v0);
        rep.add_absolute("radial_ode_plus", params, lhs / scale, rhs / scale, tol,
                         "residual scaled by the largest operator term");
    }
    {
        // D_q^- = conj(D_{-q}^+), with chi^- in place of conj(chi^+)
        double c1 = -2.0 * q + 1.0;
        cplx c0 = double(q * q - 2 * q) - 4.0 * pi * pi * r * r - 8.0 * par.chi_minus();
        cplx lhs = d2 - c1 / r * d1 + c0 / (r * r) * v0;
        cplx rhs = 4.0 * pi * I * double(l + q) / r * neighbour(q - 1);
        double scale = std::abs(d2) + std::abs(c1 / r * d1) + std::abs(c0 / (r * r) * v0);
        rep.add_absolute("radial_ode_minus", params, lhs / scale, rhs / scale, tol,
                         "residual scaled by the largest operator term");
    }
    return rep;
}

cplx radial_inner(int l, int l_prime, int q, int p, cplx nu, const QuadratureSpec& spec) {
    KHarmonicIndex a{l, p, q}, b{l_prime, p, q};
    a.validate();
    b.validate();
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-17);
    auto f = [&](double r) -> cplx {
        cplx va = v_lq(a, nu, r, spec);
        cplx vb = l == l_prime ? va : v_lq(b, nu, r, spec);
        return va * std::conj(vb) / r;
    };
    return radial_half_line(f, 1e-15, qs);
}

VerificationReport orthogonality_check(int l, int l_prime, int q, int p, cplx nu, const QuadratureSpec& spec,
                                       double tol) {
    cplx integral = radial_inner(l, l_prime, q, p, nu, spec);
    VerificationReport rep;
    rep.suite = "complex_orthogonality";
    json params = lq_params(l, q, p, nu);
    params["l_prime"] = l_prime;
    if (l == l_prime) {
        double n = phi_norm({l, p, q});
        rep.add_relative("radial_norm", params, integral, n * n / 4.0, tol);
    } else {
        rep.add_absolute("radial_orthogonality", params, integral, 0.0, tol);
    }
    return rep;
}

cplx gamma_lq(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec) {
    KHarmonicIndex idx{l, p, q};
    idx.validate();
    if (!(s.real() > std::abs(nu.real()) / 2.0))
        throw std::domain_error("gamma_lq: the Mellin integral needs Re s > |Re nu| / 2");
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-300);
    auto f = [&](double r) { return v_lq(idx, nu, r, spec) * cpow(r, 2.0 * s - 2.0); };
    return radial_half_line(f, 1e-15, qs);
}

namespace {

// L_{l,q}(s); *abs_integral receives the integral of the modulus, the natural
// size against which a vanishing L is judged
cplx L_integral(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec, double* abs_integral) {
    KHarmonicIndex idx{l, p, q};
    idx.validate();
    const std::vector<double> poly = radial_poly(idx);
    int lo = 0, hi = int(poly.size()) - 1;
    while (lo <= hi && poly[lo] == 0.0) ++lo;
    while (hi >= lo && poly[hi] == 0.0) --hi;
    if (lo > hi) {
        if (abs_integral) *abs_integral = 0.0;
        return 0.0;
    }
    // v^{1+nu-2s+lo} near 0 and v^{-1-nu-2s-2l+hi} at infinity
    double x0 = 1.0 + nu.real() - 2.0 * s.real() + lo;
    double x1 = -1.0 - nu.real() - 2.0 * s.real() - 2.0 * l + hi;
    if (!(x0 > -1.0 && x1 < -1.0)) throw std::domain_error("L_lq: s outside the strip of convergence");
    const cplx e = 2.0 + nu - 2.0 * s;  // includes the dv = v dt
    const cplx expo = 1.0 + nu + double(l);
    std::vector<double> rev(poly.rbegin(), poly.rend());  // P(v) / v^{2l} as a polynomial in 1/v
    // (0, 1] and [1, inf) in t = log v, where the powers become exponentials;
    // for v > 1 everything is scaled by v^{-2l} so nothing overflows
    auto g = [&](double t) -> cplx {
        if (t <= 0.0) {
            double v = std::exp(t);
            return std::exp(e * t - expo * std::log1p(v * v)) * poly_eval(poly, v);
        }
        double w = std::exp(-t);
        return std::exp((e + 2.0 * l) * t - expo * (2.0 * t + std::log1p(w * w))) * poly_eval(rev, w);
    };
    QuadratureSpec qs = inner_spec(spec);
    if (abs_integral) {
        // |g| has kinks at real zeros of the polynomial; a size needs few digits
        QuadratureSpec loose = spec;
        loose.abs_tol = 1e-12;
        loose.rel_tol = 1e-6;
        auto m = [&](double t) -> cplx { return std::abs(g(t)); };
        *abs_integral = (gauss_kronrod(m, {-INFINITY, 0.0}, loose).value +
                         gauss_kronrod(m, {0.0, INFINITY}, loose).value).real();
    }
    return double_exponential(g, {-INFINITY, 0.0}, qs).value + double_exponential(g, {0.0, INFINITY}, qs).value;
}

cplx gamma_via_L_scaled(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec, double* scale) {
    const double a = std::abs(p + q);
    cplx pre = cpow(pi, 1.0 + nu - 2.0 * s) * sign_of(std::min(0, p + q)) * i_pow(-p - q) *
               gamma(s + (a - nu) / 2.0) * rgamma(1.0 - s + (a + nu) / 2.0);
    double labs = 0.0;
    cplx L = L_integral(l, q, p, nu, s, spec, scale ? &labs : nullptr);
    if (scale) *scale = std::abs(pre) * labs;
    return pre * L;
}

// |lhs - rhs| against the larger of the two sides and of a natural size of
// the terms, so that identities between two vanishing values stay meaningful
Check& add_scaled(VerificationReport& rep, std::string id, json params, cplx lhs, cplx rhs, double size,
                  double tol, std::string note = {}) {
    double d = std::max({std::abs(lhs), std::abs(rhs), size});
    if (d == 0.0) d = 1.0;
    json p = std::move(params);
    p["size"] = size;
    return rep.add_absolute(std::move(id), std::move(p), lhs / d, rhs / d, tol, std::move(note));
}

}  // namespace

cplx L_lq(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec) {
    return L_integral(l, q, p, nu, s, spec, nullptr);
}

cplx gamma_lq_via_L(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec) {
    return gamma_via_L_scaled(l, q, p, nu, s, spec, nullptr);
}

VerificationReport verify_local_fe_complex(int l, int q, int p, cplx nu, cplx s, const QuadratureSpec& spec,
                                           double tol) {
    KHarmonicIndex{l, p, q}.validate();
    VerificationReport rep;
    rep.suite = "local_fe_complex";
    json params = lq_params(l, q, p, nu);
    params["s"] = to_json(s);
    const std::string how = "lhs and rhs divided by max(|lhs|, |rhs|, size of the terms)";

    double size_s = 0.0, size_ns = 0.0, size_1s = 0.0;
    cplx g_s = gamma_lq(l, q, p, nu, s, spec);
    cplx gl_s = gamma_via_L_scaled(l, q, p, nu, s, spec, &size_s);
    add_scaled(rep, "gamma_via_L", params, g_s, gl_s, size_s, tol, how);

    double la = 0.0, lb = 0.0;
    cplx L_s = L_integral(l, q, p, nu, s, spec, &la);
    cplx L_r = sign_of(l - p) * L_integral(l, -q, p, nu, 1.0 - s, spec, &lb);
    add_scaled(rep, "L_reflection", params, L_s, L_r, std::max(la, lb), tol, how);

    const double a = std::abs(p + q), b = std::abs(p - q);
    cplx g_ns = q == 0 ? g_s : gamma_lq(l, -q, p, nu, s, spec);
    if (q == 0) size_ns = size_s;
    else gamma_via_L_scaled(l, -q, p, nu, s, spec, &size_ns);
    cplx lhs = sign_of(l - q) * g_ns;
    cplx g_1s = gamma_lq(l, q, p, nu, 1.0 - s, spec);
    gamma_via_L_scaled(l, q, p, nu, 1.0 - s, spec, &size_1s);
    cplx pre = cpow(pi, 2.0 - 4.0 * s) * sign_of(std::max(std::abs(p), std::abs(q)));
    cplx num = gamma(s + (a + nu) / 2.0) * gamma(s + (b - nu) / 2.0);
    cplx fac = pre * num * rgamma(1.0 - s + (a - nu) / 2.0) * rgamma(1.0 - s + (b + nu) / 2.0);
    cplx fac_printed = pre * num * rgamma(1.0 - s + (a + nu) / 2.0) * rgamma(1.0 - s + (b - nu) / 2.0);
    double size = std::max(size_ns, std::abs(fac) * size_1s);
    double d = std::max({std::abs(lhs), std::abs(fac * g_1s), size});
    double printed_res = std::abs(lhs - fac_printed * g_1s) / std::max(d, std::abs(fac_printed * g_1s));
    add_scaled(rep, "local_functional_equation", params, lhs, fac * g_1s, size, tol,
               how + "; printed-form residual " + std::to_string(printed_res));
    return rep;
}

cplx kirillov_complex_basis(int l, int q, int p, cplx nu, cplx u, const QuadratureSpec& spec) {
    if (u == 0.0) throw std::domain_error("kirillov_complex_basis: u must be nonzero");
    KHarmonicIndex idx{l, p, q};
    double r = std::abs(u);
    return cpow(u / r, double(-q)) * v_lq(idx, nu, r, spec) / phi_norm(idx);
}

cplx kirillov_complex_transform(const GaussPrincipalVector& phi, cplx u, const QuadratureSpec& spec) {
    phi.validate();
    if (u == 0.0) throw std::domain_error("kirillov_complex_transform: u must be nonzero");
    cplx acc = 0.0;
    for (const auto& [lq, c] : phi.coefficients)
        if (c != 0.0) acc += c * kirillov_complex_basis(lq.first, lq.second, phi.param.p, phi.param.nu, u, spec);
    return acc;
}

std::vector<std::vector<cplx>> kirillov_complex_gram(int p, cplx nu, const std::vector<std::pair<int, int>>& lq,
                                                     const QuadratureSpec& spec) {
    const std::size_t n = lq.size();
    for (const auto& [l, q] : lq) KHarmonicIndex{l, p, q}.validate();
    // the phases (u/|u|)^{-q} are trigonometric polynomials of degree <= 2 max l;
    // this many trapezoid nodes integrate their products exactly
    int max_l = 0;
    for (const auto& e : lq) max_l = std::max(max_l, e.first);
    const int nodes = 4 * max_l + 8;
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-17);
    std::vector<std::vector<cplx>> gram(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx ang = 0.0;
            for (int k = 0; k < nodes; ++k) {
                double th = 2.0 * pi * k / nodes;
                ang += std::polar(1.0, -(lq[i].second - lq[j].second) * th);
            }
            ang *= 2.0 * pi / nodes;
            cplx radial = 0.0;
            if (std::abs(ang) > 1e-12) {
                KHarmonicIndex a{lq[i].first, p, lq[i].second}, b{lq[j].first, p, lq[j].second};
                double na = phi_norm(a), nb = phi_norm(b);
                auto f = [&](double r) -> cplx {
                    cplx va = v_lq(a, nu, r, spec);
                    cplx vb = i == j ? va : v_lq(b, nu, r, spec);
                    return va * std::conj(vb) / (na * nb * r);
                };
                radial = radial_half_line(f, 1e-15, qs);
            }
            gram[i][j] = MeasureConvention::complex_factor * ang * radial;
            gram[j][i] = std::conj(gram[i][j]);
        }
    }
    return gram;
}

cplx weyl_kernel_sum(int p, cplx nu, cplx z, int m_max, const QuadratureSpec& spec) {
    if (z == 0.0) throw std::domain_error("weyl_kernel_sum: z must be nonzero");
    if (m_max < 0) throw std::invalid_argument("weyl_kernel_sum: m_max must be nonnegative");
    double x = 2.0 * pi * std::abs(z);
    cplx ph = z / std::abs(z);
    cplx acc = 0.0;
    // outermost terms first, so the small ones are not lost
    for (int m = m_max; m >= 0; --m) {
        for (int sg : {1, -1}) {
            if (m == 0 && sg < 0) continue;
            int mm = sg * m;
            acc += sign_of(std::max(std::abs(p), m)) * K_kernel(nu, p, x, mm, spec) * std::pow(ph, 2 * mm);
        }
    }
    return acc;
}

VerificationReport verify_weyl_complex(int l, int q, int p, cplx nu, cplx u, const QuadratureSpec& spec, double tol,
                                       WeylParts parts) {
    KHarmonicIndex idx{l, p, q}, idx_neg{l, p, -q};
    idx.validate();
    if (nu.real() != 0.0) throw std::domain_error("verify_weyl_complex: nu must be purely imaginary");
    if (u == 0.0) throw std::domain_error("verify_weyl_complex: u must be nonzero");
    VerificationReport rep;
    rep.suite = "weyl_complex";
    json params = lq_params(l, q, p, nu);
    params["u"] = to_json(u);
    const double lam = std::abs(u);
    const double qsign = sign_of(l - q);
    const double msign = sign_of(std::max(std::abs(p), std::abs(q)));

    if (parts.radial) {
        cplx lhs = qsign * v_lq(idx_neg, nu, lam * lam, spec) / (lam * lam);
        QuadratureSpec qs = spec;
        qs.abs_tol = std::min(spec.abs_tol, 1e-15);
        auto f = [&](double r) -> cplx {
            if (r == 0.0) return 0.0;
            return K_kernel(nu, p, 2.0 * pi * lam * r, q, spec) * v_lq(idx, nu, r * r, spec) * r;
        };
        // v(r^2) r is O(r^3) at 0 and below e^{-2 pi r^2}
        cplx integral = panel_sum(f, 0.0, 0.5, 1e-13, qs);
        rep.add_relative("weyl_radial", params, lhs, 8.0 * pi * pi * msign * integral, tol);
    }

    if (parts.kernel) {
        const int m1 = 20, m2 = 40;
        cplx k1 = weyl_kernel_sum(p, nu, u, m1, spec);
        cplx k2 = weyl_kernel_sum(p, nu, u, m2, spec);
        json kp = params;
        kp["m_max"] = json::array({m1, m2});
        rep.add_absolute("weyl_kernel_truncation", kp, k1, k2, 1e-10);
        cplx closed = j_complex({p, nu}, u) / (4.0 * pi * lam * lam);
        rep.add_relative("weyl_kernel_closed", kp, k2, closed, tol);
    }

    if (parts.full) {
        const double norm_q = phi_norm(idx), norm_nq = phi_norm(idx_neg);
        cplx u2 = u * u;
        cplx lhs = qsign * cpow(u2 / std::abs(u2), double(q)) * v_lq(idx_neg, nu, std::abs(u2), spec) / norm_nq;
        const ReprOrderComplex ord{p, nu};
        // v = rho e^{i phi}: K phi_{l,q}(v^2) = e^{-2 i q phi} v^l_q(rho^2) / norm; the
        // angular integral by the trapezoid rule, doubled until it settles
        auto angular = [&](double rho) -> cplx {
            cplx prev = 0.0;
            for (int nodes = 32; nodes <= 2048; nodes *= 2) {
                cplx acc = 0.0;
                for (int k = 0; k < nodes; ++k) {
                    double ph = 2.0 * pi * k / nodes;
                    acc += j_complex(ord, u * std::polar(rho, ph)) * std::polar(1.0, -2.0 * q * ph);
                }
                acc *= 2.0 * pi / nodes;
                if (nodes > 32 && std::abs(acc - prev) <= 1e-13 * std::max(1.0, std::abs(acc))) return acc;
                prev = acc;
            }
            throw ConvergenceError("verify_weyl_complex: angular trapezoid did not settle");
        };
        auto f = [&](double rho) -> cplx {
            if (rho == 0.0) return 0.0;
            return angular(rho) * v_lq(idx, nu, rho * rho, spec) / (norm_q * rho);
        };
        QuadratureSpec qs = spec;
        qs.abs_tol = std::min(spec.abs_tol, 1e-15);
        cplx rhs = panel_sum(f, 0.0, 0.5, 1e-13, qs);
        rep.add_relative("weyl_full", params, lhs, rhs, tol,
                         "with (2/pi) d^x v: residual " +
                             std::to_string(rel_diff(lhs, MeasureConvention::complex_factor * rhs)));
    }
    return rep;
}

}  // namespace zm
