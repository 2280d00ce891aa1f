#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zm/report.hpp"
#include "zm/weights.hpp"
#include "zm/zeta.hpp"

namespace zm {

struct AtkinsonBreakdown {
    double gamma_term = 0.0;    // digamma(1/2 + it) integral
    double residue_term = 0.0;  // 2 pi Re g(i/2)
    std::vector<std::pair<int, double>> divisor_tail;  // (n, 4 d(n) I_n)
    double total = 0.0;
    // Same sum with digamma at 1/4 + it/2, reported alongside.
    double alt_gamma_term = 0.0;
    double alt_total = 0.0;
    // Cauchy control of the n-sum: |S(2N) - S(N)| at the last doubling.
    double cauchy_delta = 0.0;
    bool cauchy_ok = false;
    std::string weight_id;

    json to_json() const;
    std::string to_csv() const;  // n, term, partial_sum
};

// int_R |L(1/2 + it)|^(2 power) g(t) dt; the line is cut at spec.truncation_radius.
double mean_value_direct(const LSelector& L, const Weight& g, const QuadratureSpec& spec);

// I_n = int_0^inf (r(r+1))^(-1/2) g_c(log(1 + 1/r)) cos(2 pi n r) dr,
// from the two rotated rays r = +-iy.
double atkinson_n_integral(const Weight& g, int n, const QuadratureSpec& spec);
// 4 d(n) I_n for n in [n_lo, n_hi].
std::vector<double> atkinson_terms(const Weight& g, int n_lo, int n_hi, const QuadratureSpec& spec,
                                   Exec exec = Exec::parallel);

// Explicit side. The n-sum is doubled until |S(2N) - S(N)| < tol/4 with
// tol = spec.rel_tol * |total|, or n_max is reached (cauchy_ok = false).
AtkinsonBreakdown atkinson_explicit(const Weight& g, int n_max, const QuadratureSpec& spec);

// Test function for the Poisson summation check.
struct PoissonFunction {
    std::string name;
    RealIntegrand F;
    std::optional<double> lhs_closed;  // sum_{n >= 1} F(n), when known
    double decay_check = 1e-17;        // |F(n_max)| must fall below this without lhs_closed
};

PoissonFunction poisson_gaussian_pi();   // e^{-pi r^2}
PoissonFunction poisson_gaussian_one();  // e^{-r^2}
PoissonFunction poisson_lorentz();       // 1/(1 + r^2)

VerificationReport verify_poisson(const PoissonFunction& F, int n_max, const QuadratureSpec& spec, double tol);

// int_0^inf cos(2 pi r) r^(s-1) dr = (2 pi)^(-s) cos(pi s/2) Gamma(s)
VerificationReport verify_cosine_mellin(const std::vector<cplx>& s_grid, const QuadratureSpec& spec, double tol);

}  // namespace zm
