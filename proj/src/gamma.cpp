#include <array>
#include <cmath>

#include "zm/specfun.hpp"

namespace zm {

namespace {

constexpr std::array<double, 10> bern = {1.0 / 6,          -1.0 / 30,    1.0 / 42,       -1.0 / 30,
                                         5.0 / 66,         -691.0 / 2730, 7.0 / 6,       -3617.0 / 510,
                                         43867.0 / 798,    -174611.0 / 330};

constexpr double stirling_radius = 15.0;

// log Gamma(w) for |w| >= 15, Re w > 0.
cplx stirling(cplx w) {
    cplx s = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2 * pi);
    cplx winv = 1.0 / w, w2 = winv * winv, pw = winv;
    for (int k = 1; k <= 10; ++k) {
        s += bern[k - 1] / (2.0 * k * (2.0 * k - 1)) * pw;
        pw *= w2;
    }
    return s;
}

void check_pole(cplx z, const char* what) {
    if (is_nonpositive_integer(z)) throw PoleError(std::string(what) + ": pole at nonpositive integer");
}

// sin(pi z) with exact zeros at integers and good accuracy near them.
cplx sinpi(cplx z) {
    double n = std::round(z.real());
    cplx r(z.real() - n, z.imag());
    cplx v = std::sin(pi * r);
    return (static_cast<long long>(n) % 2 == 0) ? v : -v;
}

cplx cospi(cplx z) {
    double n = std::round(z.real());
    cplx r(z.real() - n, z.imag());
    cplx v = std::cos(pi * r);
    return (static_cast<long long>(n) % 2 == 0) ? v : -v;
}

// log sin(pi z), finite where sin itself overflows (|Im z| large); the
// imaginary part is correct modulo 2 pi only.
cplx log_sinpi(cplx z) {
    if (std::abs(z.imag()) < 20.0) return std::log(sinpi(z));
    double n = std::round(z.real());
    cplx r(z.real() - n, z.imag());
    cplx odd = (static_cast<long long>(n) % 2 == 0) ? 0.0 : cplx(0.0, pi);
    if (r.imag() > 0.0) return -I * pi * r + std::log(0.5 * I) + std::log(1.0 - std::exp(2.0 * pi * I * r)) + odd;
    return I * pi * r - std::log(2.0 * I) + std::log(1.0 - std::exp(-2.0 * pi * I * r)) + odd;
}

}  // namespace

cplx loggamma(cplx z) {
    check_pole(z, "loggamma");
    if (z.real() < 0.5) {
        // Reflection; the imaginary part is fixed up to the continuous branch
        // only modulo 2 pi.
        return std::log(pi) - log_sinpi(z) - loggamma(1.0 - z);
    }
    cplx w = z;
    cplx shift = 0.0;
    while (std::abs(w) < stirling_radius) {
        shift += std::log(w);
        w += 1.0;
    }
    return stirling(w) - shift;
}

cplx gamma(cplx z) {
    check_pole(z, "gamma");
    if (z.real() < 0.5) {
        cplx s = sinpi(z);
        cplx g1 = gamma(1.0 - z);
        return pi / (s * g1);
    }
    if (z.imag() == 0.0 && z.real() <= 20.0 && z.real() == std::floor(z.real())) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(z.real()); ++k) f *= k;
        return f;
    }
    cplx w = z;
    cplx prod = 1.0;
    while (std::abs(w) < stirling_radius) {
        prod *= w;
        w += 1.0;
    }
    cplx l = stirling(w);
    if (l.real() > 709.7) throw OverflowError("gamma: result overflows");
    return std::exp(l) / prod;
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() < 0.5) return sinpi(z) * gamma(1.0 - z) / pi;
    cplx w = z;
    cplx prod = 1.0;
    while (std::abs(w) < stirling_radius) {
        prod *= w;
        w += 1.0;
    }
    return prod * std::exp(-stirling(w));
}

cplx digamma(cplx z) {
    check_pole(z, "digamma");
    if (z.real() < 0.5) return digamma(1.0 - z) - pi * cospi(z) / sinpi(z);
    cplx w = z;
    cplx shift = 0.0;
    while (std::abs(w) < stirling_radius) {
        shift += 1.0 / w;
        w += 1.0;
    }
    cplx winv = 1.0 / w, w2 = winv * winv, pw = w2;
    cplx s = std::log(w) - 0.5 * winv;
    for (int k = 1; k <= 10; ++k) {
        s -= bern[k - 1] / (2.0 * k) * pw;
        pw *= w2;
    }
    return s - shift;
}

}  // namespace zm
