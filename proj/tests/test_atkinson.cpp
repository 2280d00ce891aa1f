#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "zm/atkinson.hpp"

using namespace zm;

TEST_CASE("direct mean value") {
    QuadratureSpec qs;
    Weight g1 = gaussian_weight(1.0);
    double m = mean_value_direct({}, g1, qs);
    CHECK(m > 0.0);
    QuadratureSpec wide = qs;
    wide.truncation_radius *= 2.0;
    CHECK(std::fabs(mean_value_direct({}, g1, wide) - m) < 1e-10 * m);
    QuadratureSpec narrow = qs;
    narrow.truncation_radius = 7.0;
    CHECK_THROWS_AS(mean_value_direct({}, g1, narrow), std::invalid_argument);

    LSelector fourth{LSelector::Tag::riemann, 2};
    double m4 = mean_value_direct(fourth, g1, qs);
    CHECK(m4 > 0.0);
    CHECK(mean_value_direct(fourth, gaussian_weight(1.0), qs) > mean_value_direct(fourth, gaussian_weight(0.5), qs));
    LSelector dk{LSelector::Tag::dedekind_gaussian, 1};
    CHECK(mean_value_direct(dk, g1, qs) > 0.0);
    CHECK_THROWS_AS(mean_value_direct(LSelector{LSelector::Tag::riemann, 3}, g1, qs), std::invalid_argument);
}

TEST_CASE("explicit side: residue term and arithmetic") {
    QuadratureSpec qs;
    AtkinsonBreakdown b = atkinson_explicit(gaussian_weight(1.0), 32, qs);
    CHECK(std::fabs(b.residue_term - 2.0 * pi * std::exp(0.25)) < 1e-13);
    double s = b.gamma_term + b.residue_term;
    for (auto [n, v] : b.divisor_tail) s += v;
    CHECK(std::fabs(s - b.total) < 1e-14 * std::fabs(b.total));
    CHECK(b.divisor_tail.size() == 32);
    CHECK_THROWS_AS(atkinson_explicit(gaussian_weight(1.0), 0, qs), std::invalid_argument);
}

TEST_CASE("rotated n-integral against real-axis quadrature") {
    QuadratureSpec qs;
    for (double d : {1.0, 2.0}) {
        Weight g = gaussian_weight(d);
        for (int n : {1, 3}) {
            auto h = [&](double r) {
                if (r == 0.0) return cplx(0.0);
                double gc = d * std::sqrt(pi) * std::exp(-d * d * std::pow(std::log1p(1.0 / r), 2) / 4.0);
                return cplx(gc / std::sqrt(r * (r + 1.0)) * std::cos(2.0 * pi * n * r));
            };
            QuadratureSpec os = qs;
            os.abs_tol = 1e-15;
            os.rel_tol = 1e-12;
            double head = tanh_sinh([&](double r, double, double) { return h(r); }, 0.0, 1.0, os).value.real();
            double tail = integrate_oscillatory(h, 1.0, 1.0 / (2.0 * n), os).value.real();
            CHECK(std::fabs(atkinson_n_integral(g, n, qs) - (head + tail)) < 1e-9);
        }
    }
}

TEST_CASE("serial and parallel term lists agree bit for bit") {
    QuadratureSpec qs;
    Weight g = gaussian_weight(2.0);
    auto a = atkinson_terms(g, 1, 200, qs, Exec::serial);
    auto b = atkinson_terms(g, 1, 200, qs, Exec::parallel);
    REQUIRE(a.size() == b.size());
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i] == b[i];
    CHECK(same);
}

TEST_CASE("Cauchy property of the divisor tail") {
    QuadratureSpec qs;
    Weight g = gaussian_weight(2.0);
    auto t = atkinson_terms(g, 1, 2000, qs);
    double s1000 = 0.0, s2000 = 0.0;
    for (int i = 0; i < 2000; ++i) {
        if (i < 1000) s1000 += t[i];
        s2000 += t[i];
    }
    CHECK(std::fabs(s2000 - s1000) < 1e-6);
}

TEST_CASE("explicit formula against the direct mean value") {
    QuadratureSpec qs;
    for (double d : {2.0, 4.0}) {
        Weight g = gaussian_weight(d);
        double direct = mean_value_direct({}, g, qs);
        AtkinsonBreakdown b = atkinson_explicit(g, 2000, qs);
        CHECK(b.cauchy_ok);
        CHECK(std::fabs(direct - b.total) < 1e-6 * direct);
        // the quarter-shifted digamma argument does not reproduce the mean value
        CHECK(std::fabs(direct - b.alt_total) > 1e-2 * direct);
    }
}

TEST_CASE("breakdown serialisation") {
    QuadratureSpec qs;
    AtkinsonBreakdown b = atkinson_explicit(gaussian_weight(4.0), 2000, qs);
    json j = b.to_json();
    CHECK(j["weight"] == "gaussian:4");
    CHECK(j["divisor_tail"].size() == b.divisor_tail.size());
    std::string csv = b.to_csv();
    CHECK(csv.rfind("n,term,partial_sum\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == long(b.divisor_tail.size()) + 1);
}

TEST_CASE("Poisson battery") {
    QuadratureSpec qs;
    auto r1 = verify_poisson(poisson_gaussian_pi(), 50, qs, 1e-12);
    auto r2 = verify_poisson(poisson_gaussian_one(), 50, qs, 1e-12);
    auto r3 = verify_poisson(poisson_lorentz(), 50, qs, 1e-10);
    for (auto* r : {&r1, &r2, &r3}) {
        REQUIRE(r->checks.size() == 1);
        CHECK(r->checks[0].pass);
        INFO(r->checks[0].residual);
    }
    // lattice-sum oracle for the Lorentzian left side
    CHECK(std::fabs(r3.checks[0].lhs.real() - (pi / std::tanh(pi) - 1.0) / 2.0) < 1e-15);
    // a direct sum cut short before F has decayed is refused
    PoissonFunction slow{"1/(1+r^2) no closed form", poisson_lorentz().F, std::nullopt};
    CHECK_THROWS_AS(verify_poisson(slow, 50, qs, 1e-10), std::domain_error);
}

TEST_CASE("cosine Mellin transform") {
    QuadratureSpec qs;
    auto rep = verify_cosine_mellin({0.25, 0.5, 0.9, cplx(0.3, 2.0)}, qs, 1e-8);
    CHECK(rep.all_pass());
    // closed form at s = 1/4 spelled out
    double v = std::pow(2.0 * pi, -0.25) * std::cos(pi / 8.0) * std::tgamma(0.25);
    CHECK(std::fabs(rep.checks[0].rhs.real() - v) < 1e-13 * v);
    CHECK_THROWS_AS(verify_cosine_mellin({1.2}, qs, 1e-8), std::domain_error);
    CHECK_THROWS_AS(verify_cosine_mellin({0.0}, qs, 1e-8), std::domain_error);
}
