#include "zm/bessel_repr.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zm/dd.hpp"
#include "zm/specfun.hpp"

namespace zm {

namespace {

cplx cpow(cplx base, cplx e) { return std::exp(e * std::log(base)); }

double dist_to_integer(cplx nu) { return std::abs(nu - std::round(nu.real())); }

// Value at nu from six samples nu + k h, k = +-1, +-2, +-3; the sixth order
// interpolant at the centre. Used where the formula itself is 0/0.
template <class F>
cplx richardson(F&& f, cplx nu, double h) {
    static constexpr std::array<double, 3> w{0.75, -0.3, 0.05};
    cplx acc = 0.0;
    for (int k = 1; k <= 3; ++k) acc += w[k - 1] * (f(nu + double(k) * h) + f(nu - double(k) * h));
    return acc;
}

constexpr double near_integer = 1.5e-3;
constexpr double richardson_step = 5e-3;

cplx jstar(cplx mu, cplx w) { return std::exp(-mu * std::log(2.0)) * bessel_jstar(mu, w); }

cplx series_form(int p, cplx nu, cplx u) {
    cplx w = 2.0 * pi * u;
    double aw = std::abs(w);
    cplx e = w / aw;
    cplx e2p = std::pow(e, 2 * p);
    cplx t1 = e2p * std::exp(-2.0 * nu * std::log(aw)) * jstar(double(p) - nu, w) * jstar(double(-p) - nu, std::conj(w));
    cplx t2 = std::exp(2.0 * nu * std::log(aw)) / e2p * jstar(nu - double(p), w) * jstar(double(p) + nu, std::conj(w));
    double au = std::abs(u);
    return 2.0 * pi * pi * au * au * (t1 - t2) / std::sin(pi * nu);
}

cplx hankel_form(int p, cplx nu, cplx u) {
    cplx w = 2.0 * pi * u;
    if (w.real() < 0.0) w = -w;  // even in u
    cplx wc = std::conj(w);
    cplx a = double(p) - nu, b = double(p) + nu;
    cplx d = hankel1(a, w) * hankel1(b, wc) - hankel2(a, w) * hankel2(b, wc);
    double au = std::abs(u);
    double sign = (p % 2 == 0) ? 1.0 : -1.0;
    return I * pi * pi * sign * au * au * d;
}

void check_u(cplx u, const char* who) {
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) throw std::invalid_argument(std::string(who) + ": u is not finite");
    if (u == 0.0) throw std::domain_error(std::string(who) + ": u must be nonzero");
}

// sin(pi nu) J_2nu(x) + cos(pi nu) Y_2nu(x). Written through Y it cancels
// like e^{2 pi |Im nu|}; away from integer nu the J difference does not.
cplx jy_combo(cplx nu, cplx x) {
    cplx mu = 2.0 * nu;
    if (dist_to_integer(nu) > 0.05) return (bessel_j(mu, x) - bessel_j(-mu, x)) / (2.0 * std::sin(pi * nu));
    return std::sin(pi * nu) * bessel_j(mu, x) + std::cos(pi * nu) * bessel_y(mu, x);
}

}  // namespace

cplx j_real(const ReprOrderReal& order, double u) {
    if (!std::isfinite(u)) throw std::invalid_argument("j_real: u is not finite");
    if (u == 0.0) throw std::domain_error("j_real: u must be nonzero");
    cplx nu = order.nu;
    if (order.policy == SingularityPolicy::reject && is_integer(2.0 * nu))
        throw std::domain_error("j_real: 2 nu is an integer and the policy rejects the limit");
    double x = 4.0 * pi * std::sqrt(std::abs(u));
    if (u < 0.0) return 4.0 * std::sqrt(-u) * std::cos(pi * nu) * bessel_k(2.0 * nu, x);
    return -2.0 * pi * std::sqrt(u) * jy_combo(nu, x);
}

cplx j_complex_series(const ReprOrderComplex& order, cplx u) {
    check_u(u, "j_complex");
    int p = order.p;
    if (dist_to_integer(order.nu) < near_integer)
        return richardson([&](cplx v) { return series_form(p, v, u); }, order.nu, richardson_step);
    return series_form(p, order.nu, u);
}

cplx j_complex_hankel(const ReprOrderComplex& order, cplx u) {
    check_u(u, "j_complex");
    int p = order.p;
    double d = dist_to_integer(order.nu);
    // Hankel functions of order near an integer come from J_{+-mu} with a
    // 1/sin(pi mu) factor; stay away from that cancellation.
    if (d > 0.0 && d < near_integer)
        return richardson([&](cplx v) { return hankel_form(p, v, u); }, order.nu, richardson_step);
    return hankel_form(p, order.nu, u);
}

cplx j_complex(const ReprOrderComplex& order, cplx u) {
    check_u(u, "j_complex");
    if (2.0 * pi * std::abs(u) <= 2.0) return j_complex_series(order, u);
    return j_complex_hankel(order, u);
}

cplx j_complex_via_integral(const ReprOrderComplex& order, cplx u, const QuadratureSpec& spec, double split) {
    check_u(u, "j_complex_via_integral");
    spec.validate();
    const int p = order.p;
    const cplx nu = order.nu;
    const double X = 2.0 * pi * std::abs(u);
    const cplx e = u / std::abs(u);
    const double l0 = split > 0.0 ? split : std::max(2.0, 3.0 / X);
    if (l0 < 2.0) throw std::invalid_argument("j_complex_via_integral: split must be at least 2");

    // z(l) and its mirror as analytic functions of l
    auto zz = [&](cplx l, cplx& z, cplx& zb) {
        z = l * e + 1.0 / (l * e);
        zb = l / e + e / l;
    };
    auto phase = [&](cplx z, cplx zb) { return (z == 0.0 || zb == 0.0) ? cplx(1.0) : std::pow(z / zb, p); };
    // folded integrand with the Bessel factor supplied
    auto weight = [&](cplx l, cplx ph) { return cpow(l, 2.0 * nu - 1.0) * ph + cpow(l, -2.0 * nu - 1.0) / ph; };

    QuadratureSpec qs = spec;
    auto head = [&](double l) -> cplx {
        cplx z, zb;
        zz(l, z, zb);
        double R = std::sqrt(std::abs(z * zb));
        return weight(l, phase(z, zb)) * bessel_j(double(2 * p), X * R);
    };
    IntegralResult r = gauss_kronrod(head, {1.0, l0}, qs);

    auto radius = [&](cplx l) {
        cplx l2 = l * l;
        return l * std::sqrt(1.0 + (e * e + 1.0 / (e * e)) / l2 + 1.0 / (l2 * l2));
    };
    auto tail = [&](int which) {
        return [&, which](cplx xi) -> cplx {
            cplx l = xi / X;
            cplx z, zb;
            zz(l, z, zb);
            cplx arg = X * radius(l);
            cplx h = which == 1 ? hankel1(double(2 * p), arg) : hankel2(double(2 * p), arg);
            return 0.5 * weight(l, phase(z, zb)) * h / X;
        };
    };
    std::array<Piece, 2> pieces{Piece{tail(1), +1}, Piece{tail(2), -1}};
    r += integrate_rotated(pieces, X * l0, qs);

    double sign = (p % 2 == 0) ? 1.0 : -1.0;
    double au = std::abs(u);
    return 4.0 * pi * au * au * sign * r.value;
}

cplx graf_sum(int p, double Z, double z, double theta, int m_max, double* tail) {
    if (m_max < 0) throw std::invalid_argument("graf_sum: m_max must be nonnegative");
    if (!(Z >= 0.0) || !(z >= 0.0)) throw std::invalid_argument("graf_sum: radii must be nonnegative");
    auto term = [&](int m) {
        int s = std::max(std::abs(p), std::abs(m));
        double sign = (s % 2 == 0) ? 1.0 : -1.0;
        cplx jj = bessel(BesselKind::J, double(std::abs(m + p)), Z) * bessel(BesselKind::J, double(std::abs(m - p)), z);
        return sign * jj * std::exp(I * (2.0 * m * theta));
    };
    cdd acc(term(0));
    for (int m = 1; m <= m_max; ++m) {
        acc += cdd(term(m));
        acc += cdd(term(-m));
    }
    if (tail) *tail = m_max == 0 ? std::abs(term(0)) : std::abs(term(m_max)) + std::abs(term(-m_max));
    return acc.to_complex();
}

cplx graf_closed(int p, double Z, double z, double theta) {
    cplx w = Z * std::exp(I * theta) + z * std::exp(-I * theta);
    double aw = std::abs(w);
    double sign = (p % 2 == 0) ? 1.0 : -1.0;
    if (aw == 0.0) return p == 0 ? cplx(1.0) : cplx(0.0);
    return sign * bessel(BesselKind::J, double(2 * p), aw) * std::pow(w / aw, 2 * p);
}

cplx K_kernel(cplx nu, int p, double r, int q, const QuadratureSpec& spec) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("K_kernel: r must be positive");

    if (std::abs(nu.real()) >= 0.25) throw std::domain_error("K_kernel: needs |Re nu| < 1/4");
    const double a = std::abs(p + q), b = std::abs(p - q);
    // the Hankel split only pays off past the turning point of the larger order
    const double l0 = std::max(1.0, std::max(3.0, 1.5 * std::max(a, b)) / r);
    QuadratureSpec qs = spec;

    // l = e^t on [1, l0]
    IntegralResult res;
    if (l0 > 1.0) {
        auto head = [&](double t) -> cplx {
            double l = std::exp(t);
            cplx fa = std::exp((2.0 * nu) * t) * bessel(BesselKind::J, a, r * l) * bessel(BesselKind::J, b, r / l);
            cplx fb = std::exp((-2.0 * nu) * t) * bessel(BesselKind::J, b, r * l) * bessel(BesselKind::J, a, r / l);
            return fa + fb;
        };
        res = gauss_kronrod(head, {0.0, std::log(l0)}, qs);
    }
    // xi = r l beyond r l0; J(xi) = (H1 + H2)/2 split across the two half planes
    auto tail = [&](int which) {
        return [&, which](cplx xi) -> cplx {
            cplx l = xi / r;
            cplx small = r * r / xi;
            cplx ha = which == 1 ? hankel1(a, xi) : hankel2(a, xi);
            cplx hb = which == 1 ? hankel1(b, xi) : hankel2(b, xi);
            cplx fa = cpow(l, 2.0 * nu - 1.0) * ha * bessel_j(b, small);
            cplx fb = cpow(l, -2.0 * nu - 1.0) * hb * bessel_j(a, small);
            return 0.5 * (fa + fb) / r;
        };
    };
    std::array<Piece, 2> pieces{Piece{tail(1), +1}, Piece{tail(2), -1}};
    res += integrate_rotated(pieces, r * l0, qs);
    return res.value;
}

cplx K_mellin_closed(cplx nu, int p, int q, cplx s) {
    double a = std::abs(p + q), b = std::abs(p - q);
    cplx s4 = s / 4.0;
    return std::exp((s - 3.0) * std::log(2.0)) * gamma(s4 + (a + nu) / 2.0) * gamma(s4 + (b - nu) / 2.0) *
           rgamma(1.0 - s4 + (a - nu) / 2.0) * rgamma(1.0 - s4 + (b + nu) / 2.0);
}

cplx K_mellin_printed(cplx nu, int p, int q, cplx s) {
    double a = std::abs(p + q), b = std::abs(p - q);
    cplx s4 = s / 4.0;
    return std::exp((s - 3.0) * std::log(2.0)) * gamma(s4 + (a + nu) / 2.0) * gamma(s4 + (b - nu) / 2.0) *
           rgamma(1.0 - s4 + (a + nu) / 2.0) * rgamma(1.0 - s4 + (b - nu) / 2.0);
}

VerificationReport verify_K_mellin(cplx nu, int p, int q, cplx s, const QuadratureSpec& spec, double tol) {
    double rn = std::abs(nu.real());
    if (!(s.real() > 2.0 * rn && s.real() < 1.0 - 2.0 * rn))
        throw std::domain_error("verify_K_mellin: s outside the strip 2|Re nu| < Re s < 1 - 2|Re nu|");
    QuadratureSpec inner = spec;
    inner.abs_tol = std::min(spec.abs_tol, 1e-14);
    auto f = [&](double r) { return r == 0.0 ? cplx(0.0) : K_kernel(nu, p, r, q, inner) * cpow(r, s - 1.0); };
    // (0, 1] in x = -log r: K is bounded there, r^s decays in x
    QuadratureSpec qs = spec;
    IntegralResult head = double_exponential([&](double x) { return f(std::exp(-x)) * std::exp(-x); }, {0.0, INFINITY}, qs);
    IntegralResult tail = integrate_oscillatory(f, 1.0, pi / 2.0, qs);
    cplx numeric = head.value + tail.value;
    cplx closed = K_mellin_closed(nu, p, q, s);
    VerificationReport rep;
    rep.suite = "K_mellin";
    json params{{"nu", to_json(nu)}, {"p", p}, {"q", q}, {"s", to_json(s)}};
    rep.add_relative("K_mellin", params, numeric, closed, tol);
    cplx printed = K_mellin_printed(nu, p, q, s);
    rep.checks.back().note = "printed-form relative residual " + std::to_string(rel_diff(numeric, printed));
    return rep;
}

cplx mellin_j_negative_closed(cplx nu, cplx s) {
    return std::exp(-2.0 * s * std::log(2.0 * pi)) / pi * std::cos(pi * nu) * gamma(s + 0.5 + nu) * gamma(s + 0.5 - nu);
}

cplx mellin_j_positive_closed(cplx nu, cplx s) {
    return -std::exp(-2.0 * s * std::log(2.0 * pi)) / pi * std::sin(pi * s) * gamma(s + 0.5 + nu) * gamma(s + 0.5 - nu);
}

namespace {

void check_negative_strip(cplx nu, cplx s) {
    if (!(s.real() > std::abs(nu.real()) - 0.5))
        throw std::domain_error("mellin_j: needs Re s > |Re nu| - 1/2");
}

void check_positive_strip(cplx nu, cplx s) {
    check_negative_strip(nu, s);
    if (!(s.real() < -0.25)) throw std::domain_error("mellin_j: the positive half line needs Re s < -1/4");
}

// u = (x / 4 pi)^2: u^(s-1) du = (x/4pi)^(2s-2) x / (8 pi^2) dx
cplx jacobian(cplx x, cplx s) { return cpow(x / (4.0 * pi), 2.0 * s - 2.0) * x / (8.0 * pi * pi); }

}  // namespace

cplx mellin_j_negative(cplx nu, cplx s, const QuadratureSpec& spec) {
    check_negative_strip(nu, s);
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-300);
    auto f = [&](double x) -> cplx {
        if (x == 0.0) return 0.0;
        return 4.0 * (x / (4.0 * pi)) * std::cos(pi * nu) * bessel_k(2.0 * nu, x) * jacobian(x, s);
    };
    auto g = [&](double x, double, double) { return f(x); };
    IntegralResult head = tanh_sinh(g, 0.0, 1.0, qs);
    IntegralResult tail = double_exponential(f, {1.0, INFINITY}, qs);
    return head.value + tail.value;
}

cplx mellin_j_positive(cplx nu, cplx s, const QuadratureSpec& spec) {
    check_positive_strip(nu, s);
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-300);
    const double x0 = 4.0;
    auto g = [&](double x, double, double) -> cplx {
        if (x == 0.0) return 0.0;
        return -2.0 * pi * (x / (4.0 * pi)) * jy_combo(nu, x) * jacobian(x, s);
    };
    IntegralResult head = tanh_sinh(g, 0.0, x0, qs);
    // sin(pi nu) J + cos(pi nu) Y = (-i/2) e^{i pi nu} H1 + (i/2) e^{-i pi nu} H2
    const cplx mu = 2.0 * nu;
    const cplx c1 = -0.5 * I * std::exp(I * pi * nu), c2 = 0.5 * I * std::exp(-I * pi * nu);
    auto piece = [&](int which) {
        return [&, which](cplx x) -> cplx {
            cplx h = which == 1 ? c1 * hankel1(mu, x) : c2 * hankel2(mu, x);
            return -2.0 * pi * (x / (4.0 * pi)) * h * jacobian(x, s);
        };
    };
    std::array<Piece, 2> pieces{Piece{piece(1), +1}, Piece{piece(2), -1}};
    IntegralResult tail = integrate_rotated(pieces, x0, qs);
    return head.value + tail.value;
}

VerificationReport verify_mellin_j(const ReprOrderReal& order, const std::vector<cplx>& s_grid,
                                   const QuadratureSpec& spec, double tol) {
    spec.validate();
    VerificationReport rep;
    rep.suite = "mellin_j";
    for (cplx s : s_grid) check_negative_strip(order.nu, s);
    for (cplx s : s_grid) {
        json params{{"nu", to_json(order.nu)}, {"s", to_json(s)}};
        rep.add_relative("mellin_j_negative", params, mellin_j_negative(order.nu, s, spec),
                         mellin_j_negative_closed(order.nu, s), tol);
        if (s.real() < -0.25)
            rep.add_relative("mellin_j_positive", params, mellin_j_positive(order.nu, s, spec),
                             mellin_j_positive_closed(order.nu, s), tol);
    }
    return rep;
}

}  // namespace zm
