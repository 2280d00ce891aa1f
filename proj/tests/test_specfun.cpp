#include <random>

#include "doctest.h"
#include "zm/quadrature.hpp"
#include "zm/specfun.hpp"

using namespace zm;

namespace {
double rel(cplx a, cplx b) { return rel_diff(a, b); }
}  // namespace

TEST_CASE("gamma basic values") {
    CHECK(rel(zm::gamma(1.0), 1.0) < 1e-15);
    CHECK(rel(zm::gamma(5.0), 24.0) < 1e-15);
    CHECK(rel(zm::gamma(0.5), std::sqrt(pi)) < 1e-14);
    cplx z(0.5, 3.0);
    cplx lhs = zm::gamma(z) * zm::gamma(1.0 - z);
    cplx rhs = pi / std::sin(pi * z);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("gamma poles and overflow are distinct") {
    CHECK_THROWS_AS(zm::gamma(0.0), PoleError);
    CHECK_THROWS_AS(zm::gamma(-3.0), PoleError);
    CHECK_THROWS_AS(zm::gamma(200.0), OverflowError);
    CHECK(rgamma(-2.0) == cplx(0.0));
}

TEST_CASE("gamma reflection on random strip points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(0.01, 0.99), im(-20.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        cplx z(re(rng), im(rng));
        cplx v = zm::gamma(z) * zm::gamma(1.0 - z) * std::sin(pi * z) / pi;
        CHECK(std::abs(v - 1.0) < 1e-12);
    }
}

TEST_CASE("gamma conjugation and recurrence") {
    cplx z(2.3, -4.1);
    CHECK(rel(zm::gamma(std::conj(z)), std::conj(zm::gamma(z))) < 1e-15);
    CHECK(rel(zm::gamma(z + 1.0), z * zm::gamma(z)) < 1e-14);
    CHECK(rel(std::exp(loggamma(z)), zm::gamma(z)) < 1e-13);
}

TEST_CASE("digamma") {
    cplx d1 = digamma(1.0);
    CHECK(std::abs(d1 + euler_gamma) < 1e-15);
    CHECK(rel(digamma(2.0), d1 + 1.0) < 1e-14);
    CHECK(rel(digamma(0.5), d1 - 2.0 * std::log(2.0)) < 1e-14);
    cplx a = digamma(cplx(1.0, 0.0)), b = digamma(cplx(1.0, -0.0));
    CHECK(rel(a, std::conj(b)) < 1e-15);
    cplx z(0.5, 7.0);
    CHECK(rel(digamma(z + 1.0), digamma(z) + 1.0 / z) < 1e-13);
    CHECK(rel(digamma(std::conj(z)), std::conj(digamma(z))) < 1e-15);
    CHECK_THROWS_AS(digamma(-1.0), PoleError);
    // reflection psi(1-z) - psi(z) = pi cot(pi z)
    cplx w(-2.7, 0.4);
    CHECK(rel(digamma(1.0 - w) - digamma(w), pi / std::tan(pi * w)) < 1e-12);
}

TEST_CASE("Bessel spec examples") {
    CHECK(bessel(BesselKind::J, 0.0, 0.0) == cplx(1.0));
    double x = pi / 2;
    CHECK(rel(bessel(BesselKind::J, 0.5, x), std::sqrt(2.0 / (pi * x)) * std::sin(x)) < 1e-14);
    cplx k = bessel(BesselKind::K, cplx(0.0, 2.0), 1.0);
    CHECK(std::fabs(k.imag()) < 1e-14);
    CHECK_THROWS(bessel(BesselKind::K, 0.0, 0.0));
    CHECK_THROWS(bessel(BesselKind::Y, 0.0, -1.0));
}

TEST_CASE("half-order closed forms across the argument range") {
    for (double x : {0.1, 1.0, 7.5, 24.0, 26.0, 40.0, 120.0, 900.0}) {
        double s = std::sqrt(2.0 / (pi * x));
        // absolute against the envelope; relative error is meaningless at zeros
        CHECK(std::abs(bessel_j(0.5, x) - s * std::sin(x)) < 2e-13 * s);
        CHECK(std::abs(bessel_j(-0.5, x) - s * std::cos(x)) < 2e-13 * s);
        CHECK(std::abs(bessel_y(0.5, x) + s * std::cos(x)) < 2e-13 * s);
        CHECK(rel(bessel_k(0.5, x), std::sqrt(pi / (2 * x)) * std::exp(-x)) < 1e-13);
        if (x < 700) CHECK(rel(bessel_i(0.5, x), s * std::sinh(x)) < 1e-13);
    }
}

TEST_CASE("Bessel Wronskians") {
    // J Y' - J' Y = 2/(pi x), with derivatives from the recurrences.
    for (cplx mu : {cplx(0.0), cplx(1.0), cplx(2.5), cplx(0.0, 1.0), cplx(0.3, 2.0)}) {
        for (double x : {0.7, 5.0, 20.0, 30.0, 60.0}) {
            cplx j = bessel_j(mu, x), y = bessel_y(mu, x);
            cplx dj = mu / x * j - bessel_j(mu + 1.0, x);
            cplx dy = mu / x * y - bessel_y(mu + 1.0, x);
            cplx w = j * dy - dj * y;
            CHECK(std::abs(w - 2.0 / (pi * x)) < 1e-10 * (2.0 / (pi * x)) * std::max(1.0, std::abs(j * dy)));
        }
    }
    // central differences at matched step
    double h = 1e-5;
    for (double x : {1.3, 9.0}) {
        cplx mu = 0.75;
        auto J = [&](double t) { return bessel_j(mu, t); };
        auto Y = [&](double t) { return bessel_y(mu, t); };
        cplx dj = (J(x + h) - J(x - h)) / (2 * h), dy = (Y(x + h) - Y(x - h)) / (2 * h);
        cplx w = J(x) * dy - dj * Y(x);
        CHECK(std::abs(w - 2.0 / (pi * x)) < 1e-6);
    }
    // I K' - I' K = -1/x
    for (cplx mu : {cplx(0.0), cplx(0.0, 3.0), cplx(0.0, 6.0), cplx(1.5, 0.5)}) {
        for (double x : {0.5, 2.5, 6.0, 15.0}) {
            cplx i = bessel_i(mu, x), k = bessel_k(mu, x);
            cplx di = mu / x * i + bessel_i(mu + 1.0, x);
            cplx dk = mu / x * k - bessel_k(mu + 1.0, x);
            cplx w = i * dk - di * k;
            CHECK(std::abs(w + 1.0 / x) < 1e-9 / x * std::max(1.0, std::abs(i * dk)));
        }
    }
}

TEST_CASE("K of imaginary order is real, all regimes") {
    for (double kap : {0.5, 2.0, 3.0, 6.0, 12.0})
        for (double x : {0.01, 1.0, 2.5, 7.0, 15.0, 40.0}) {
            cplx k = bessel_k(cplx(0.0, kap), x);
            CHECK(std::fabs(k.imag()) <= 1e-12 * std::max(std::abs(k), 1e-300));
        }
}

TEST_CASE("K imaginary order matches I-difference at small x and ODE branch") {
    // continuity across the internal regime switches
    cplx mu(0.0, 6.0);
    for (double x : {1.999, 2.001}) {
        cplx a = bessel_k(mu, x), b = bessel_k(mu, x + 1e-9);
        CHECK(std::abs(a - b) < 1e-6 * std::abs(a) + 1e-12);
    }
    double x0 = std::max(12.0, pi * 6.0 / 2 + 4.0);
    cplx a = bessel_k(mu, x0 - 1e-9), b = bessel_k(mu, x0 + 1e-9);
    CHECK(rel(a, b) < 1e-8);
}

TEST_CASE("Bessel conjugation symmetry") {
    cplx mu(0.4, 1.7);
    for (double x : {0.5, 10.0, 30.0}) {
        CHECK(rel(bessel_j(std::conj(mu), x), std::conj(bessel_j(mu, x))) < 1e-14);
        CHECK(rel(bessel_k(std::conj(mu), x), std::conj(bessel_k(mu, x))) < 1e-14);
        CHECK(rel(bessel_y(std::conj(mu), x), std::conj(bessel_y(mu, x))) < 1e-14);
    }
    cplx z(3.0, 2.0);
    CHECK(rel(bessel_jstar(std::conj(mu), std::conj(z)), std::conj(bessel_jstar(mu, z))) < 1e-14);
}

TEST_CASE("large-argument J uses asymptotics or ODE consistently") {
    // Graf-free check: J_{n-1} + J_{n+1} = (2n/x) J_n
    for (cplx mu : {cplx(3.0), cplx(0.0, 6.0), cplx(10.0, 2.0)})
        for (double x : {20.0, 26.0, 35.0, 80.0}) {
            cplx lhs = bessel_j(mu - 1.0, x) + bessel_j(mu + 1.0, x);
            cplx rhs = 2.0 * mu / x * bessel_j(mu, x);
            CHECK(std::abs(lhs - rhs) < 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1e-3}));
        }
    // complex argument: Hankel sum equals 2J
    cplx z(30.0, 5.0), mu(0.0, 2.0);
    CHECK(rel(hankel1(mu, z) + hankel2(mu, z), 2.0 * bessel_j(mu, z)) < 1e-12);
}

TEST_CASE("Hankel functions deep in their decaying half plane") {
    // mpmath hankel1 at 25 digits; J-combinations lose ~exp(2 Im z) here
    struct Row { cplx mu, z, h1; };
    Row rows[] = {{{0.5, 0.3}, {3.0, 10.0}, {1.239501902646588e-5, 1.2803943600477135e-5}},
                  {{2.0, 1.0}, {1.0, 15.0}, {-3.0178376113112897e-7, 1.2879612752227578e-7}},
                  {{0.0, 0.0}, {0.2, 3.0}, {0.0050615921587672766, -0.021506578335627434}}};
    for (const auto& r : rows) {
        CHECK(rel(hankel1(r.mu, r.z), r.h1) < 1e-13);
        // H2 at conjugate arguments is the conjugate
        CHECK(rel(hankel2(std::conj(r.mu), std::conj(r.z)), std::conj(r.h1)) < 1e-13);
    }
}

TEST_CASE("integer-order Y") {
    // Y_{n-1} + Y_{n+1} = (2n/x) Y_n
    for (double x : {0.3, 4.0, 24.9, 25.1, 50.0})
        for (int n : {1, 2, 5}) {
            cplx lhs = bessel_y(double(n - 1), x) + bessel_y(double(n + 1), x);
            cplx rhs = 2.0 * n / x * bessel_y(double(n), x);
            CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(std::abs(lhs), 1.0));
        }
    // continuity at non-integer neighbour
    CHECK(rel(bessel_y(2.0, 3.0), bessel_y(2.0 + 1e-7, 3.0)) < 1e-6);
    CHECK(rel(bessel_y(-3.0, 2.0), -bessel_y(3.0, 2.0)) < 1e-15);
}

TEST_CASE("Whittaker reductions") {
    CHECK(rel(whittaker_w(0.0, 0.5, 2.0), std::exp(-1.0)) < 1e-12);
    double y = 1.0;
    cplx mu(0.0, 1.0);
    cplx w = whittaker_w(0.0, mu, y);
    cplx oracle = std::sqrt(y / pi) * bessel_k(mu, y / 2);
    CHECK(std::abs(w - oracle) < 1e-10);
    cplx w80 = whittaker_w(1.0, mu, 80.0);
    double ratio = std::abs(w80 / (80.0 * std::exp(-40.0)));
    CHECK(std::fabs(ratio - 1.0) < 0.05);
    // W_{kappa, mu}(y) for kappa = mu + 1/2 is y^(mu+1/2) e^{-y/2}
    cplx k = cplx(0.5, 0.0) + mu;
    CHECK(rel(whittaker_w(k, mu, 3.0), std::exp((mu + 0.5) * std::log(3.0)) * std::exp(-1.5)) < 1e-10);
    bool uf = false;
    CHECK(whittaker_w(0.0, mu, 5000.0, &uf) == cplx(0.0));
    CHECK(uf);
}

TEST_CASE("Whittaker recurrence branch agrees with direct integral at real mu") {
    // kappa = 2 with mu = 1.8 is still in the integral's range; the recurrence
    // route at mu = 0 can be compared through continuity in mu.
    cplx a = whittaker_w(2.0, 1.6, 3.0);
    cplx b = whittaker_w(2.0, 1.6 - 1e-9, 3.0);
    CHECK(rel(a, b) < 1e-7);
    // W_{kappa,mu}: recurrence in kappa checked against the three-term identity
    cplx mu(0.0, 1.0);
    double z = 4.0;
    for (double kap : {1.0, 2.0, 3.0}) {
        cplx wp = whittaker_w(kap + 1.0, mu, z), w0 = whittaker_w(kap, mu, z), wm = whittaker_w(kap - 1.0, mu, z);
        cplx res = wp - (z - 2 * kap) * w0 + ((kap - 0.5) * (kap - 0.5) - mu * mu) * wm;
        CHECK(std::abs(res) < 1e-10 * std::abs(wp));
    }
    CHECK(rel(whittaker_w(1.0, std::conj(mu), z), std::conj(whittaker_w(1.0, mu, z))) < 1e-14);
}

TEST_CASE("hyp2f1") {
    CHECK(hyp2f1(0.3, 0.7, 1.1, 0.0) == cplx(1.0));
    CHECK(rel(hyp2f1(1.0, 1.0, 2.0, -1.0), std::log(2.0)) < 1e-14);
    // z F(1,1;2;z) = -log(1-z), also far from the disk
    for (cplx z : {cplx(-5.0, 0.0), cplx(-0.9, 0.0), cplx(0.95, 0.1), cplx(3.0, 2.0), cplx(-9.0, -4.0)})
        CHECK(rel(z * hyp2f1(1.0, 1.0, 2.0, z), -std::log(1.0 - z)) < 1e-12);
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, -2.0, 0.3), PoleError);
    CHECK_THROWS(hyp2f1(1.0, 1.0, 2.0, 1.5));
    // Gauss contiguous relation
    //   (c-a) F(a-1) + (2a - c + (b-a) z) F(a) + a (z-1) F(a+1) = 0
    cplx a(0.5, 1.0), b(0.5, 1.0), c(1.0, 2.0);
    cplx z = -0.3;
    cplx res = (c - a) * hyp2f1(a - 1.0, b, c, z) + (2.0 * a - c + (b - a) * z) * hyp2f1(a, b, c, z) +
               a * (z - 1.0) * hyp2f1(a + 1.0, b, c, z);
    CHECK(std::abs(res) < 1e-10);
    // same relation at large negative z where continuation is used
    z = -800.0;
    res = (c - a) * hyp2f1(a - 1.0, b, c, z) + (2.0 * a - c + (b - a) * z) * hyp2f1(a, b, c, z) +
          a * (z - 1.0) * hyp2f1(a + 1.0, b, c, z);
    CHECK(std::abs(res) < 1e-10 * std::abs(a * (z - 1.0) * hyp2f1(a + 1.0, b, c, z)));
    // conjugation
    cplx v = hyp2f1(a, b, c, cplx(-4.0, 0.0));
    CHECK(rel(hyp2f1(std::conj(a), std::conj(b), std::conj(c), -4.0), std::conj(v)) < 1e-13);
    // Euler integral oracle for the degenerate c = a + b case, real parameters:
    // F(a,a;2a;z) = Gamma(2a)/Gamma(a)^2 int_0^1 t^(a-1)(1-t)^(a-1)(1-zt)^(-a) dt
    double aa = 0.75;
    double zz = -40.0;
    QuadratureSpec qs;
    auto f = [&](double t) { return cplx(std::pow(t, aa - 1) * std::pow(1 - t, aa - 1) * std::pow(1 - zz * t, -aa)); };
    cplx integ = double_exponential(f, {0.0, 1.0}, qs).value * zm::gamma(2 * aa) / (zm::gamma(aa) * zm::gamma(aa));
    CHECK(rel(hyp2f1(aa, aa, 2 * aa, zz), integ) < 1e-11);
}

TEST_CASE("hyp2f1 at very large negative z") {
    // mpmath hyp2f1 at 30 digits
    CHECK(rel(hyp2f1(cplx(0.5, 1), cplx(0.5, 1), cplx(1, 2), -1e9),
              cplx(0.000356046083769497, 2.91031566236767e-6)) < 1e-12);
    CHECK(rel(hyp2f1(cplx(0.5, 20), cplx(0.5, 20), cplx(1, 40), -1e12),
              cplx(-4.85919756375460e-5, -1.93188922140572e-5)) < 1e-11);
    // a - b not an integer: Euler integral, all mass near t = 0
    double a = 0.3, b = 0.8, c = 1.9, z = -1e9;
    QuadratureSpec qs;
    auto f = [&](double t) { return cplx(std::pow(t, b - 1) * std::pow(1 - t, c - b - 1) * std::pow(1 - z * t, -a)); };
    cplx integ = double_exponential(f, {0.0, 1.0}, qs).value * zm::gamma(c) / (zm::gamma(b) * zm::gamma(c - b));
    CHECK(rel(hyp2f1(a, b, c, z), integ) < 1e-10);
}

TEST_CASE("quadrature spec examples") {
    QuadratureSpec qs;
    auto r = integrate([](double x) { return cplx(std::exp(-x)); }, {0.0, INFINITY}, qs);
    CHECK(std::abs(r.value - 1.0) < 1e-13);
    CHECK(r.evaluations >= 1);
    auto r2 = integrate_oscillatory([](double x) { return cplx(std::cos(2 * pi * x) * std::exp(-x)); }, 0.0, 0.5, qs);
    CHECK(std::abs(r2.value - 1.0 / (1.0 + 4 * pi * pi)) < 1e-12);
    auto r3 = integrate([](double x) { return cplx(1.0 / std::sqrt(x)); }, {0.0, 1.0}, qs);
    CHECK(std::abs(r3.value - 2.0) < 1e-12);
    QuadratureSpec bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = QuadratureSpec{};
    bad.working_precision_bits = 40;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double) { return cplx(NAN); }, {0.0, 1.0}, qs), ConvergenceError);
    // plain x-only integrand losing the endpoint: the estimate still covers the error
    auto lossy = integrate([](double x) { return cplx(1.0 / std::sqrt(1 - x * x)); }, {-1.0, 1.0}, qs);
    CHECK(lossy.error_estimate >= std::abs(lossy.value - pi));
}

TEST_CASE("quadrature honesty battery") {
    struct Case {
        RealIntegrand f;
        Domain d;
        cplx exact;
    };
    std::vector<Case> battery = {
        {[](double x) { return cplx(std::exp(-x)); }, {0.0, INFINITY}, 1.0},
        {[](double x) { return cplx(1.0 / std::sqrt(x)); }, {0.0, 1.0}, 2.0},
        {[](double x) { return cplx(std::log(x)); }, {0.0, 1.0}, -1.0},
        {[](double x) { return cplx(x * x); }, {0.0, 3.0}, 9.0},
        {[](double x) { return cplx(1.0 / (1.0 + x * x)); }, {-INFINITY, INFINITY}, pi},
        {[](double x) { return cplx(std::exp(-x * x)); }, {-INFINITY, INFINITY}, std::sqrt(pi)},
        {[](double x) { return cplx(std::pow(x, -0.9)); }, {0.0, 1.0}, 10.0},
        {[](double x) { return cplx(std::sin(x)); }, {0.0, pi}, 2.0},
        {[](double x) { return cplx(std::cos(50 * x)); }, {0.0, pi / 2}, std::sin(25 * pi) / 50},
        {[](double x) { return cplx(1.0 / (1.0 + x) / std::sqrt(x)); }, {0.0, INFINITY}, pi},
        {[](double x) { return cplx(std::exp(-200 * x)); }, {0.0, INFINITY}, 1.0 / 200},
        {[](double x) { return cplx(x * std::exp(-x)); }, {0.0, INFINITY}, 1.0},
        {[](double x) { return cplx(std::sqrt(1 - x * x)); }, {-1.0, 1.0}, pi / 2},
        {[](double x) { return cplx(1.0 / std::sqrt(1 - x * x)); }, {-1.0, 1.0}, pi},
        {[](double x) { return std::exp(I * x) * std::exp(-x); }, {0.0, INFINITY}, 1.0 / (1.0 - I)},
        {[](double x) { return cplx(std::log(x) * std::exp(-x)); }, {0.0, INFINITY}, -euler_gamma},
        {[](double x) { return cplx(1.0 / (x * x + 1e-2)); }, {-1.0, 1.0}, 20.0 * std::atan(10.0)},
        {[](double x) { return cplx(std::exp(x)); }, {0.0, 1.0}, std::exp(1.0) - 1.0},
        {[](double x) { return cplx(std::cos(x) * std::exp(-x * x / 2)); }, {-INFINITY, INFINITY},
         std::sqrt(2 * pi) * std::exp(-0.5)},
        {[](double x) { return cplx(std::pow(x, 1.5) * std::exp(-x)); }, {0.0, INFINITY}, 0.75 * std::sqrt(pi)},
    };
    for (QuadMethod m : {QuadMethod::DoubleExponential, QuadMethod::AdaptiveSubdivision}) {
        QuadratureSpec qs;
        qs.method = m;
        qs.rel_tol = 1e-10;
        qs.abs_tol = 1e-12;
        qs.max_subdivisions = 20000;
        int idx = 0;
        for (auto& c : battery) {
            CAPTURE(idx);
            CAPTURE(int(m));
            if (m == QuadMethod::AdaptiveSubdivision && idx == 6) {
                ++idx;  // x^-0.9 is beyond GK's reach at this tolerance
                continue;
            }
            IntegralResult r;
            if (idx == 13 && m == QuadMethod::DoubleExponential)
                r = tanh_sinh([](double, double da, double db) { return cplx(1.0 / std::sqrt(da * db)); }, -1.0, 1.0,
                              qs);
            else
                r = integrate(c.f, c.d, qs);
            double actual = std::abs(r.value - c.exact);
            CHECK(r.error_estimate >= actual);
            double tol = std::max(qs.abs_tol, qs.rel_tol * std::abs(c.exact));
            if (idx == 13 && m == QuadMethod::AdaptiveSubdivision)
                // x-only 1/sqrt(1-x^2): the mass within an ulp of +-1 is ~1e-8,
                // out of reach; the estimate has to say so
                CHECK(r.error_estimate > tol);
            else
                CHECK(actual <= tol * 10);
            ++idx;
        }
    }
}

TEST_CASE("mellin_numeric") {
    QuadratureSpec qs;
    auto e = [](cplx x) { return std::exp(-x); };
    CHECK(std::abs(mellin_numeric(e, 2.0, qs).value - 1.0) < 1e-12);
    cplx s(0.5, 1.0);
    CHECK(rel(mellin_numeric(e, s, qs).value, zm::gamma(s)) < 1e-10);
    std::vector<Wave> cosw = {{[](cplx) { return cplx(0.5); }, 2 * pi}, {[](cplx) { return cplx(0.5); }, -2 * pi}};
    cplx expect = std::pow(2 * pi, -0.25) * std::cos(pi / 8) * zm::gamma(0.25);
    CHECK(rel(mellin_numeric(cosw, 0.25, qs).value, expect) < 1e-10);
    // divergence detection
    CHECK_THROWS_AS(mellin_numeric(e, -0.5, qs), std::domain_error);
    CHECK_THROWS_AS(mellin_numeric([](cplx) { return cplx(1.0); }, 1.5, qs), std::domain_error);
}

TEST_CASE("rotated tails") {
    // int_1^inf e^{ix}/x^2 dx by rotation vs oscillatory panels
    QuadratureSpec qs;
    std::vector<Piece> p = {{[](cplx z) { return std::exp(I * z) / (z * z); }, 1}};
    cplx rot = integrate_rotated(p, 1.0, qs).value;
    cplx osc = integrate_oscillatory([](double x) { return std::exp(I * x) / (x * x); }, 1.0, pi, qs).value;
    CHECK(std::abs(rot - osc) < 1e-10);
}

TEST_CASE("wynn epsilon accelerates alternating series") {
    std::vector<cplx> s;
    cplx acc = 0.0;
    for (int k = 0; k < 20; ++k) {
        acc += ((k % 2) ? -1.0 : 1.0) / (k + 1.0);
        s.push_back(acc);
    }
    double err = 0.0;
    cplx v = wynn_epsilon(s, &err);
    CHECK(std::abs(v - std::log(2.0)) < 1e-12);
}

TEST_CASE("J of non-integer order just inside the power-series radius") {
    // mpmath besselj, 30 digits; the series terms are ~e^x times the result here
    CHECK(std::abs(bessel_j(0.4, 19.869176531592202) - 0.1651122139396093) < 1e-14);
    CHECK(std::abs(bessel_j(cplx(0.3, 1.7), 24.5) - cplx(-0.42489470964286117, -1.0522031651040467)) < 2e-14);
    CHECK(std::abs(bessel_j(-2.6, 22.0) - 0.16234451077711876) < 1e-14);
}
