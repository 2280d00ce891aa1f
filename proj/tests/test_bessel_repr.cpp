#include "doctest.h"

#include <cmath>

#include "zm/bessel_repr.hpp"
#include "zm/specfun.hpp"

using namespace zm;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }
bool close_rel(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("j_real against mpmath") {
    struct Row { cplx nu; double u; double re; };
    // mpmath, 30 digits, from the K and J/Y forms
    const Row rows[] = {
        {{0, 0.3}, -0.7, 5.0504750050436345e-5},
        {{0, 0.3}, 0.7, 0.35045787004058327},
        {0.2, 2.5, -0.40877829287399631},
        {0.25, -0.1, 0.010572684058790438},
        {{0, 1}, 3.0, -1.6620626542459457},
    };
    for (const auto& r : rows) {
        cplx v = j_real({r.nu}, r.u);
        CHECK(close_rel(v, r.re, 1e-12));
        CHECK(std::abs(v.imag()) <= 1e-13 * std::abs(v));
    }
}

TEST_CASE("j_real at nu = 0 is the continuous limit") {
    cplx v = j_real({0.0}, -1.0);
    CHECK(close_rel(v, 4.0 * bessel_k(0.0, 4.0 * pi), 1e-13));
    CHECK(close_rel(v, 4.8848219774465217e-6, 1e-12));
    // approach from nearby orders
    cplx near = j_real({cplx(0.0, 1e-4)}, 0.9);
    CHECK(close(near, j_real({0.0}, 0.9), 1e-7));
    CHECK_THROWS_AS(j_real({0.5, SingularityPolicy::reject}, 0.3), std::domain_error);
    CHECK_THROWS_AS(j_real({0.3}, 0.0), std::domain_error);
    CHECK_NOTHROW(j_real({0.3, SingularityPolicy::reject}, 0.3));
}

TEST_CASE("Mellin transforms of j_real") {
    QuadratureSpec qs;
    for (cplx nu : {cplx(0, 1), cplx(0.2, 0), cplx(0, 0.35), cplx(0, 0)}) {
        for (cplx s : {cplx(0.2, 0), cplx(-0.3, 0), cplx(0.4, 2.0)}) {
            if (!(s.real() > std::abs(nu.real()) - 0.5)) continue;
            CHECK(close_rel(mellin_j_negative(nu, s, qs), mellin_j_negative_closed(nu, s), 1e-9));
        }
        for (cplx s : {cplx(-0.3, 0), cplx(-0.35, 1.5)}) {
            if (!(s.real() > std::abs(nu.real()) - 0.5)) continue;
            CHECK(close_rel(mellin_j_positive(nu, s, qs), mellin_j_positive_closed(nu, s), 1e-8));
        }
    }
    auto rep = verify_mellin_j({cplx(0, 1)}, {0.2, -0.3}, qs, 1e-8);
    CHECK(rep.checks.size() == 3);
    CHECK(rep.all_pass());
    CHECK_THROWS_AS(verify_mellin_j({0.3}, {-0.3}, qs, 1e-8), std::domain_error);
    CHECK_THROWS_AS(mellin_j_positive(cplx(0, 1), 0.2, qs), std::domain_error);
}

TEST_CASE("j_complex against the mpmath J* series") {
    struct Row { int p; cplx nu; cplx u; cplx v; };
    const Row rows[] = {
        {0, {0, 0.5}, {0.1, 0.05}, {0.13405192897300023, 0}},
        {1, {0, 0.5}, {0.3, 0.2}, {-0.56604598402013338, 0}},
        {2, {0.1, 0.7}, {-0.2, 0.4}, {-0.56275774665216901, -0.065463634321755073}},
        {-1, {0, 1}, {0.05, -0.25}, {0.33425716910644608, 0}},
        {1, 0.3, {0.2, 0.1}, {-0.50453392140895313, -0.053061236270513819}},
        {1, {0, 0.5}, {0.8, 0.9}, {-2.0033954291196452, 0}},
        {0, {0, 0.25}, {-1.5, 0.4}, {3.0989870578544116, 0}},
        {3, {0.05, 1.2}, {0.6, -1.1}, {-2.0501095867518116, 0.045899835972835162}},
    };
    for (const auto& r : rows) {
        CAPTURE(r.p);
        CAPTURE(r.u);
        CHECK(close_rel(j_complex({r.p, r.nu}, r.u), r.v, 1e-11));
    }
}

TEST_CASE("j_complex at integer nu") {
    // mpmath at nu = 1e-22 (resp. 1 + 1e-22), 50 digits
    CHECK(close_rel(j_complex({0, 0.0}, {0.1, 0.2}), cplx(0.1843743425451359, 0), 1e-10));
    CHECK(close_rel(j_complex({1, 1.0}, {0.2, -0.15}), cplx(-0.65126804430782559, 0.14181751282112131), 1e-10));
    CHECK(close_rel(j_complex({2, 0.0}, {0.7, 0.8}), cplx(-2.0442856186436907, 0), 1e-10));
}

TEST_CASE("j_complex: the two forms agree where both are accurate") {
    for (cplx nu : {cplx(0, 0.5), cplx(0.15, 0), cplx(0.1, 1.3)}) {
        for (int p : {0, 1, -2}) {
            for (cplx u : {cplx(0.25, 0.2), cplx(-0.3, 0.1), cplx(0.1, -0.35)}) {
                ReprOrderComplex o{p, nu};
                CHECK(close(j_complex_series(o, u), j_complex_hankel(o, u), 1e-11));
            }
        }
    }
}

TEST_CASE("j_complex symmetries") {
    for (cplx u : {cplx(0.1, 0.2), cplx(2.0, -1.5), cplx(-4.0, 3.0)}) {
        for (int p : {0, 1, 3}) {
            ReprOrderComplex o{p, cplx(0, 0.7)};
            cplx v = j_complex(o, u);
            CHECK(std::abs(v.imag()) <= 1e-10 * std::max(1.0, std::abs(v)));
            CHECK(close(j_complex({-p, o.nu}, std::conj(u)), v, 1e-11));
            CHECK(close(j_complex(o, -u), v, 1e-11));
        }
    }
    CHECK_THROWS_AS(j_complex({0, 0.3}, 0.0), std::domain_error);
}

TEST_CASE("j_complex agrees with its integral representation") {
    QuadratureSpec qs;
    struct Pt { int p; cplx nu; cplx u; };
    const Pt pts[] = {
        {0, {0, 0.5}, {0.3, 0.2}}, {1, {0, 1}, {0.5, -0.7}}, {2, {0, 0.3}, {-1.2, 0.8}},
        {0, {0.1, 0.0}, {0.05, 0.04}}, {-1, {0, 2}, {1.5, 1.5}}, {1, {0.05, 0.6}, {0.0, 0.9}},
    };
    for (const auto& t : pts) {
        ReprOrderComplex o{t.p, t.nu};
        cplx direct = j_complex(o, t.u);
        cplx integral = j_complex_via_integral(o, t.u, qs);
        CAPTURE(t.u);
        CHECK(close(integral, direct, 1e-8));
        // moving the rotation point changes nothing
        double l0 = std::max(2.0, 3.0 / (2 * pi * std::abs(t.u)));
        CHECK(close(j_complex_via_integral(o, t.u, qs, 2.0 * l0), integral, 1e-8));
    }
}

TEST_CASE("Graf addition sum") {
    double tail = 1;
    cplx s = graf_sum(0, 1.0, 1.0, 0.0, 40, &tail);
    CHECK(close(s, graf_closed(0, 1.0, 1.0, 0.0), 1e-14));
    CHECK(close(s, bessel(BesselKind::J, 0.0, 2.0), 1e-14));
    CHECK(tail < 1e-40);
    CHECK(close(graf_sum(1, 2.0, 1.0, pi / 3, 60), graf_closed(1, 2.0, 1.0, pi / 3), 1e-14));
    CHECK(close(graf_sum(-3, 5.0, 2.5, 0.7, 60), graf_closed(-3, 5.0, 2.5, 0.7), 1e-13));
    CHECK(close(graf_sum(2, 0.4, 3.0, 2.1, 60), graf_closed(2, 0.4, 3.0, 2.1), 1e-14));
    CHECK(std::abs(graf_sum(0, 1.0, 1.0, 0.4, 20) - graf_sum(0, 1.0, 1.0, 0.4, 40)) < 1e-15);
    graf_sum(0, 30.0, 30.0, 0.2, 10, &tail);
    CHECK(tail > 1e-3);
    CHECK_THROWS_AS(graf_sum(0, -1.0, 1.0, 0.0, 10), std::invalid_argument);
}

TEST_CASE("K kernel against mpmath") {
    QuadratureSpec qs;
    CHECK(close_rel(K_kernel(cplx(0, 1), 0, 1.0, 1, qs), 0.17733142377247733, 1e-9));
    CHECK(close_rel(K_kernel(0.1, 1, 2.0, 0, qs), 0.19665072445467365, 1e-9));
    CHECK(close_rel(K_kernel(cplx(0, 0.5), 2, 0.3, 1, qs), cplx(-0.0025390195132673895, 0.0041692682160810869), 1e-8));
    cplx k = K_kernel(cplx(0, 1), 0, 1.0, 1, qs);
    CHECK(std::abs(k.imag()) < 1e-12);
    CHECK_THROWS_AS(K_kernel(0.3, 0, 1.0, 0, qs), std::domain_error);
}

TEST_CASE("Mellin transform of the K kernel") {
    QuadratureSpec qs;
    qs.abs_tol = 1e-10;
    qs.rel_tol = 1e-9;
    auto rep = verify_K_mellin(0.0, 0, 0, 0.5, qs, 1e-7);
    CHECK(rep.all_pass());
    auto rep2 = verify_K_mellin(cplx(0, 1), 1, 0, 0.5, qs, 1e-7);
    CHECK(rep2.all_pass());
    // |p+q| != |p-q|: the nu-swapped denominators give a different function
    auto rep3 = verify_K_mellin(cplx(0, 0.5), 1, 1, 0.5, qs, 1e-7);
    CHECK(rep3.all_pass());
    CHECK(rel_diff(K_mellin_closed(cplx(0, 0.5), 1, 1, 0.5), K_mellin_printed(cplx(0, 0.5), 1, 1, 0.5)) > 1e-2);
    CHECK_THROWS_AS(verify_K_mellin(0.0, 0, 0, 1.2, qs, 1e-7), std::domain_error);
}
