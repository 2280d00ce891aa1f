#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "zm/spectral_data.hpp"
#include "zm/zeta.hpp"

using namespace zm;

namespace {

// Hecke-multiplicative sequence from Satake angles: tau(p^k) = U_k(cos theta_p).
std::vector<double> satake_tau(int N, double (*theta)(int)) {
    std::vector<double> t(N + 1, 0.0);
    t[1] = 1.0;
    for (int n = 2; n <= N; ++n) {
        int p = 2;
        while (n % p) ++p;
        int m = n, k = 0;
        while (m % p == 0) m /= p, ++k;
        double th = theta(p);
        double u = std::abs(std::sin(th)) < 1e-300 ? k + 1.0 : std::sin((k + 1) * th) / std::sin(th);
        t[n] = t[m] * u;
    }
    return {t.begin() + 1, t.end()};
}

double theta_sqrt2(int p) {
    double f = std::fmod(p * std::sqrt(2.0), 1.0);
    return f == 0.0 ? 0.3 : pi * f;
}
double theta_half_pi(int) { return pi / 2; }
double theta_zero(int) { return 0.0; }

MaassFormRecord real_record(std::string label, std::vector<double> tau) {
    MaassFormRecord r;
    r.label = std::move(label);
    r.eps = 1;
    r.t = 9.53369526135355;
    r.alpha = 0.5;
    r.tau = std::move(tau);
    r.normalization_tag = "alpha";
    return r;
}

std::string line_of(const MaassFormRecord& r) { return record_to_json(r).dump(); }

// number of divisors of a + bi up to units, by brute force over the box
int gauss_divisor_count(long a, long b) {
    long n = a * a + b * b;
    int count = 0;
    for (long x = 1; x * x <= n; ++x)
        for (long y = 0; x * x + y * y <= n; ++y) {
            long d = x * x + y * y;
            long re = a * x + b * y, im = b * x - a * y;
            if (re % d == 0 && im % d == 0) ++count;
        }
    return count;
}

GaussianMaassFormRecord gauss_record(long max_norm) {
    GaussianMaassFormRecord g;
    g.label = "gauss-synthetic";
    g.p = 0;
    g.t = 3.0;
    g.rho1_sq = 1.0;
    g.eps = 1;
    for (int a = 1; a * a <= max_norm; ++a)
        for (int b = 0; a * a + b * b <= max_norm; ++b) g.tau.push_back({a, b, double(gauss_divisor_count(a, b))});
    return g;
}

}  // namespace

TEST_CASE("empty catalog loads with a warning") {
    std::istringstream in("");
    auto cat = load_catalog(in, CatalogKind::real);
    CHECK(cat.size() == 0);
    REQUIRE(cat.warnings.size() == 1);
    CHECK(cat.warnings[0].find("empty") != std::string::npos);

    std::istringstream blank("\n  \n");
    CHECK(load_catalog(blank, CatalogKind::gaussian).size() == 0);
}

TEST_CASE("tau(1) = 0.9 is quarantined by name") {
    auto good = real_record("good", satake_tau(40, theta_sqrt2));
    auto bad = real_record("bad", satake_tau(40, theta_sqrt2));
    bad.tau[0] = 0.9;
    std::istringstream in(line_of(good) + "\n" + line_of(bad) + "\n");
    auto cat = load_catalog(in, CatalogKind::real);
    REQUIRE(cat.real.size() == 1);
    CHECK(cat.real[0].label == "good");
    REQUIRE(cat.quarantined.size() == 1);
    CHECK(cat.quarantined[0].line == 2);
    CHECK(cat.quarantined[0].label == "bad");
    bool named = false;
    for (const auto& v : cat.quarantined[0].violations) named = named || v.find("tau_one") != std::string::npos;
    CHECK(named);
}

TEST_CASE("save and load round trip bit for bit") {
    auto r = real_record("rt", satake_tau(64, theta_sqrt2));
    r.central_H = 0.1234567890123456789;
    r.t = 13.779751351890738;
    std::istringstream in(line_of(r) + "\n");
    auto cat = load_catalog(in, CatalogKind::real);
    REQUIRE(cat.real.size() == 1);
    std::ostringstream out;
    save_catalog(out, cat);
    std::istringstream in2(out.str());
    auto back = load_catalog(in2, CatalogKind::real);
    REQUIRE(back.real.size() == 1);
    const auto& b = back.real[0];
    CHECK(b.label == r.label);
    CHECK(b.eps == r.eps);
    CHECK(std::memcmp(&b.t, &r.t, sizeof(double)) == 0);
    CHECK(std::memcmp(&b.alpha, &r.alpha, sizeof(double)) == 0);
    REQUIRE(b.central_H.has_value());
    CHECK(std::memcmp(&*b.central_H, &*r.central_H, sizeof(double)) == 0);
    REQUIRE(b.tau.size() == r.tau.size());
    CHECK(std::memcmp(b.tau.data(), r.tau.data(), r.tau.size() * sizeof(double)) == 0);
    CHECK(b.normalization_tag == "alpha");
    std::ostringstream out2;
    save_catalog(out2, back);
    CHECK(out2.str() == out.str());
    CHECK(back.hash() == cat.hash());

    auto g = gauss_record(50);
    g.central_H = 0.75;
    Catalog gc;
    gc.kind = CatalogKind::gaussian;
    gc.gaussian.push_back(g);
    std::ostringstream gout;
    save_catalog(gout, gc);
    std::istringstream gin(gout.str());
    auto gback = load_catalog(gin, CatalogKind::gaussian);
    REQUIRE(gback.gaussian.size() == 1);
    CHECK(gback.hash() == gc.hash());
}

TEST_CASE("malformed lines carry their line number") {
    auto r = real_record("ok", satake_tau(10, theta_sqrt2));
    std::istringstream in(line_of(r) + "\n{\"label\": \"x\", \"eps\": 1,\n");
    try {
        load_catalog(in, CatalogKind::real);
        FAIL("no exception");
    } catch (const CatalogError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
    }
    std::istringstream missing("{\"label\": \"x\", \"eps\": 1, \"t\": 1.0, \"tau\": [1.0]}\n");
    try {
        load_catalog(missing, CatalogKind::real);
        FAIL("no exception");
    } catch (const CatalogError& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
    std::istringstream wrong("{\"label\": \"x\", \"eps\": \"+\", \"t\": 1.0, \"alpha\": 1, \"tau\": [1.0]}\n");
    CHECK_THROWS_AS(load_catalog(wrong, CatalogKind::real), CatalogError);
}

TEST_CASE("Hecke relations on a multiplicative seed") {
    auto r = real_record("seed", satake_tau(500, theta_sqrt2));
    auto rep = validate_hecke(r, 1e-9);
    CHECK(rep.all_pass());
    double worst = 0.0;
    for (const auto& c : rep.checks) worst = std::max(worst, c.residual);
    CHECK(worst < 1e-12);

    // tau(2)^2 = tau(4) + 1
    auto off = r;
    off.tau[3] += 1e-3;
    auto bad = validate_hecke(off, 1e-6);
    CHECK_FALSE(bad.all_pass());
    bool flagged = false;
    for (const auto& c : bad.checks)
        if (!c.pass && c.identity == "hecke_relation" && c.params["m"] == 2 && c.params["n"] == 2) flagged = true;
    CHECK(flagged);

    auto neg = r;
    neg.t = -1.0;
    CHECK_FALSE(validate_hecke(neg).all_pass());
}

TEST_CASE("Gaussian records: unit symmetries and Hecke relation") {
    auto g = gauss_record(120);
    auto rep = validate_hecke(g, 1e-12);
    CHECK(rep.all_pass());
    bool ran = false;
    for (const auto& c : rep.checks) ran = ran || c.identity == "hecke_relation_worst";
    CHECK(ran);

    CHECK(gauss_normal_form(-1, 0).a == 1);
    CHECK(gauss_normal_form(-1, 0).k == 2);
    CHECK(gauss_normal_form(0, 1).k == 1);
    CHECK(gauss_normal_form(-2, -3).a == 2);
    CHECK(gauss_normal_form(-2, -3).b == 3);
    CHECK_THROWS_AS(gauss_normal_form(0, 0), std::invalid_argument);

    // eps = -1: tau(i) = -tau(1), tau(-1) = tau(1)
    GaussianMaassFormRecord odd;
    odd.label = "odd";
    odd.eps = -1;
    odd.t = 2.0;
    odd.rho1_sq = 1.0;
    odd.tau = {{1, 0, 1.0}, {0, 1, -1.0}};
    CHECK(validate_hecke(odd).all_pass());
    CHECK(*odd.tau_at(0, 1) == -1.0);
    CHECK(*odd.tau_at(-1, 0) == 1.0);
    CHECK(*odd.tau_at(0, -1) == -1.0);
    CHECK_FALSE(odd.tau_at(2, 1).has_value());

    auto broken = odd;
    broken.tau[1].value = 1.0;  // tau(i) = tau(1) with eps = -1
    auto br = validate_hecke(broken);
    CHECK_FALSE(br.all_pass());
    bool named = false;
    for (const auto& c : br.checks) named = named || (!c.pass && c.identity == "unit_symmetry");
    CHECK(named);

    auto h = odd;
    h.central_H = 0.3;
    std::istringstream in(record_to_json(h).dump() + "\n" + record_to_json(odd).dump() + "\n");
    auto cat = load_catalog(in, CatalogKind::gaussian);
    CHECK(cat.gaussian.size() == 1);
    REQUIRE(cat.quarantined.size() == 1);
    CHECK(cat.quarantined[0].violations[0].find("central_H_vanishes") != std::string::npos);
}

TEST_CASE("hecke_series") {
    auto one = real_record("one", {1.0});
    for (cplx s : {cplx(2.0), cplx(1.5, 3.0), cplx(1.0001, -40.0)}) {
        auto v = hecke_series(one, s);
        CHECK(v.value == cplx(1.0));
        CHECK(v.provenance == "series");
    }

    SUBCASE("stored central value") {
        auto r = one;
        r.central_H = 0.75;
        auto v = hecke_series(r, 0.5);
        CHECK(v.value == cplx(0.75));
        CHECK(v.provenance == "stored");
        CHECK_THROWS_AS(hecke_series(one, 0.5), UnavailableError);
        CHECK_THROWS_AS(hecke_series(r, cplx(0.7)), UnavailableError);
        CHECK_THROWS_AS(hecke_series(r, cplx(1.0, 2.0)), UnavailableError);
        try {
            hecke_series(one, 0.5);
        } catch (const UnavailableError& e) {
            CHECK(std::string(e.what()).find("unavailable") != std::string::npos);
        }
    }

    SUBCASE("divisor seed gives zeta squared") {
        // theta = 0: tau(n) = d(n), sum d(n) n^-s = zeta(s)^2
        auto r = real_record("d", satake_tau(20000, theta_zero));
        cplx s(3.0, 1.0);
        auto z = riemann_zeta(s);
        CHECK(std::abs(hecke_series(r, s).value - z * z) < 1e-7);
    }

    SUBCASE("Gaussian divisor seed gives the Dedekind zeta squared") {
        auto g = gauss_record(400);
        cplx s(4.0, 0.5);
        auto z = dedekind_zeta_gaussian(s);
        CHECK(std::abs(hecke_series(g, s).value - z * z) < 1e-6);
        g.eps = -1;
        CHECK(hecke_series(g, 0.5).value == cplx(0.0));
    }

    SUBCASE("Cauchy decay at s = 2") {
        // bounded: tau(p) = 0, |tau(n)| <= 1
        auto r = real_record("bounded", satake_tau(20000, theta_half_pi));
        double worst = 0.0;
        for (double x : r.tau) worst = std::max(worst, std::abs(x));
        CHECK(worst <= 1.0 + 1e-12);
        auto full = hecke_series(r, 2.0, {}, 20000).value;
        auto half = hecke_series(r, 2.0, {}, 10000).value;
        double diff = std::abs(full - half);
        CHECK(diff < 5e-5);  // sum_{N < n <= 2N} n^-2
        CHECK(diff < 1e-8);
    }

    SUBCASE("smoothing") {
        auto r = real_record("s", satake_tau(2000, theta_sqrt2));
        auto raw = hecke_series(r, 3.0).value;
        auto damped = hecke_series(r, 3.0, Smoothing::gaussian(1e6)).value;
        CHECK(std::abs(raw - damped) < 1e-6);
        CHECK_THROWS_AS(Smoothing::gaussian(-1.0), std::invalid_argument);
    }
}

TEST_CASE("reads leave the catalog hash alone") {
    auto r = real_record("h", satake_tau(300, theta_sqrt2));
    r.central_H = 0.2;
    std::istringstream in(line_of(r) + "\n");
    const auto cat = load_catalog(in, CatalogKind::real);
    auto h0 = cat.hash();
    for (const auto& rec : cat.real) {
        validate_hecke(rec);
        hecke_series(rec, 2.0);
        hecke_series(rec, 0.5);
    }
    CHECK(cat.hash() == h0);
}
