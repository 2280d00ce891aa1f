#include "doctest.h"

#include <cmath>
#include <random>

#include "zm/kirillov_real.hpp"
#include "zm/specfun.hpp"

using namespace zm;

namespace {

bool close_rel(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("jacquet_phi against mpmath") {
    // mpmath whitw, 30 digits
    CHECK(close_rel(jacquet_phi(1, {0, 1}, 1.0, {0, 2.0, 0}), {-0.00013878840016652942, -0.00021266686134044577}, 1e-11));
    CHECK(close_rel(jacquet_phi(0, 0.3, 1.0), 0.003960778059051474, 1e-11));
    CHECK(close_rel(jacquet_phi(2, {0, 0.5}, -0.7, {0.3, 0.8, 0.4}), {0.00060550379110708184, 0.00019940774669755526}, 1e-11));
    CHECK(close_rel(jacquet_phi(-1, {0, 2}, 0.4, {-1.1, 1.5, 2.0}), {0.059798918132846671, -0.056588198374415891}, 1e-11));
    CHECK(std::abs(jacquet_phi(1, {0, 1}, 1.0, {0, 2.0, 0})) < 1e-3);
    CHECK_THROWS_AS(jacquet_phi(0, 0.3, 0.0), std::domain_error);
    CHECK_THROWS_AS(jacquet_phi(0, 0.3, 1.0, {0, -1.0, 0}), std::domain_error);
    // Gamma(p + 1/2 + nu) at a pole: p = -1, nu = -1/2
    CHECK_THROWS_AS(jacquet_phi(-1, -0.5, 1.0), PoleError);
}

TEST_CASE("jacquet_phi: Fourier integral equals the Whittaker form") {
    QuadratureSpec qs;
    CHECK(verify_jacquet_phi(0, 0.3, 1.0, {}, qs, 1e-8).all_pass());
    CHECK(verify_jacquet_phi(1, 0.2, -0.6, {0.4, 1.3, 0.2}, qs, 1e-8).all_pass());
    CHECK(verify_jacquet_phi(-2, {0.35, 0.8}, 0.5, {0, 0.7, 0}, qs, 1e-8).all_pass());
    // still fine on the unitary axis, where the integral is only conditionally convergent
    CHECK(verify_jacquet_phi(1, {0, 1}, 0.8, {0, 1.0, 0}, qs, 1e-8).all_pass());
}

TEST_CASE("Kirillov transform is linear and unitary") {
    QuadratureSpec qs;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (cplx nu : {cplx(0, 1), cplx(0, 2)}) {
        for (int p = -1; p <= 1; ++p)
            for (int q = -1; q <= 1; ++q) {
                cplx g = kirillov_inner(p, q, nu, qs);
                CAPTURE(p);
                CAPTURE(q);
                CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) < 1e-7);
            }
        PrincipalSeriesVector phi{nu, {{0, {d(rng), d(rng)}}, {1, {d(rng), d(rng)}}}};
        CHECK(std::abs(kirillov_norm2(phi, qs) - phi.norm() * phi.norm()) < 1e-7);
        PrincipalSeriesVector psi{nu, {{-1, {d(rng), d(rng)}}, {1, {d(rng), d(rng)}}}};
        cplx a{0.3, -1.2}, b{2.0, 0.5};
        PrincipalSeriesVector mix{nu, {}};
        for (const auto& [p, c] : phi.coefficients) mix.coefficients[p] += a * c;
        for (const auto& [p, c] : psi.coefficients) mix.coefficients[p] += b * c;
        for (int i = 0; i < 10; ++i) {
            double u = 3.0 * d(rng);
            if (u == 0.0) continue;
            cplx lhs = kirillov_transform(mix, u);
            cplx rhs = a * kirillov_transform(phi, u) + b * kirillov_transform(psi, u);
            CHECK(std::abs(lhs - rhs) <= 1e-14 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("Whittaker orthogonality integral") {
    QuadratureSpec qs;
    CHECK(verify_whittaker_orthogonality(1.0, 0.0, {0, 1}, qs).all_pass());
    CHECK(verify_whittaker_orthogonality(2.0, 1.0, {0, 0.2}, qs).all_pass());
    CHECK(verify_whittaker_orthogonality(1.0, -1.0, 0.25, qs).all_pass());
    CHECK_THROWS_AS(verify_whittaker_orthogonality(1.0, 1.0, {0, 1}, qs), std::domain_error);
    CHECK_THROWS_AS(verify_whittaker_orthogonality(1.0, 0.0, 0.6, qs), std::domain_error);
}

TEST_CASE("Gamma_p against direct mpmath quadrature") {
    QuadratureSpec qs;
    struct Row { int p; cplx nu; cplx s; cplx v; };
    // mpmath quad of the defining integral with whitw, 25 digits
    const Row rows[] = {
        {0, {0, 1}, 0.4, {-1.1685385314576101, 1.9992251258599604}},
        {1, {0, 2}, 0.5, {-0.017438146628954186, -1.1929001971743418}},
        {2, {0, 1}, {0.5, 0.3}, {1.0635773918146773, 0.25689599908263708}},
        {-1, {0, 0.5}, 0.7, {0.59416859660459096, 0.35430395124779537}},
        {0, 0.2, 0.9, {1.2606805308334354, 0}},
        {3, {0, 3}, {0.3, -1.0}, {-0.77742558773146962, 0.34503088790995555}},
    };
    for (const Row& r : rows) {
        CAPTURE(r.p);
        CHECK(close_rel(gamma_p(r.p, r.nu, r.s, qs), r.v, 1e-9));
    }
    // tightening the quadrature does not move the value
    QuadratureSpec tight = qs;
    tight.abs_tol = 1e-15;
    tight.rel_tol = 1e-13;
    CHECK(close_rel(gamma_p(0, {0, 1}, 0.4, qs), gamma_p(0, {0, 1}, 0.4, tight), 1e-8));
    CHECK_THROWS_AS(gamma_p(0, 0.3, 0.2, qs), std::domain_error);
}

TEST_CASE("Local functional equation") {
    QuadratureSpec qs;
    CHECK(verify_jl_functional_equation(0, {0, 1}, 0.4, qs).all_pass());
    CHECK(verify_jl_functional_equation(1, {0, 2}, {0.5, 0.3}, qs).all_pass());
    CHECK(verify_jl_functional_equation(2, {0, 1}, 0.5, qs).all_pass());
    CHECK(verify_jl_functional_equation(1, {0, 2}, 0.5, qs).all_pass());
    CHECK(verify_jl_functional_equation(-1, {0, 0.5}, {0.3, 2.0}, qs).all_pass());
    CHECK(verify_jl_functional_equation(0, {0, 3}, 0.7, qs).all_pass());
    CHECK_THROWS_AS(verify_jl_functional_equation(0, 0.3, 0.8, qs), std::domain_error);
}

TEST_CASE("Hankel eigenrelation") {
    QuadratureSpec qs;
    CHECK(verify_hankel_eigenrelation(0, {0, 1}, 0.5, qs).all_pass());
    CHECK(verify_hankel_eigenrelation(1, {0, 1}, -2.0, qs).all_pass());
    CHECK(verify_hankel_eigenrelation(2, {0, 3}, 2.0, qs).all_pass());
    auto serial = verify_hankel_grid({0, 1, 2}, {cplx(0, 1), cplx(0, 3)}, {0.5, -0.5, 2.0, -2.0}, qs, 1e-6, Exec::serial);
    auto par = verify_hankel_grid({0, 1, 2}, {cplx(0, 1), cplx(0, 3)}, {0.5, -0.5, 2.0, -2.0}, qs, 1e-6, Exec::parallel);
    CHECK(serial.checks.size() == 24);
    CHECK(serial.all_pass());
    MESSAGE("worst eigenrelation residual over tolerance " << serial.worst_residual());
    REQUIRE(par.checks.size() == serial.checks.size());
    for (std::size_t i = 0; i < par.checks.size(); ++i) CHECK(par.checks[i].residual == serial.checks[i].residual);
    CHECK_THROWS_AS(verify_hankel_eigenrelation(0, 0.2, 1.0, qs), std::domain_error);
}
