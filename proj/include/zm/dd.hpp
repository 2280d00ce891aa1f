#pragma once

// Double-double arithmetic (~106-bit significand) for the series kernels that
// lose digits to cancellation: Bessel power series at moderate argument and
// the hypergeometric Taylor steps.

#include <cmath>
#include <complex>

namespace zm {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double x) : hi(x), lo(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

}  // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    dd t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator-=(dd& a, dd b) { return a = a - b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }
inline dd& operator/=(dd& a, dd b) { return a = a / b; }

inline double abs_approx(dd a) { return std::fabs(a.hi); }

// Complex double-double. std::complex<dd> is unspecified, so this carries
// just the operations the series code needs.
struct cdd {
    dd re;
    dd im;

    constexpr cdd() = default;
    cdd(dd r, dd i) : re(r), im(i) {}
    cdd(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT(google-explicit-constructor)
    cdd(double x) : re(x), im(0.0) {}                              // NOLINT(google-explicit-constructor)

    std::complex<double> to_complex() const { return {double(re), double(im)}; }
    double abs_approx() const { return std::hypot(re.hi, im.hi); }
};

inline cdd operator+(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator-(const cdd& a, const cdd& b) { return {a.re - b.re, a.im - b.im}; }
inline cdd operator-(const cdd& a) { return {-a.re, -a.im}; }
inline cdd operator*(const cdd& a, const cdd& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cdd operator*(const cdd& a, dd s) { return {a.re * s, a.im * s}; }
inline cdd operator/(const cdd& a, const cdd& b) {
    dd den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline cdd operator/(const cdd& a, dd s) { return {a.re / s, a.im / s}; }
inline cdd& operator+=(cdd& a, const cdd& b) { return a = a + b; }
inline cdd& operator*=(cdd& a, const cdd& b) { return a = a * b; }

}  // namespace zm
