#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zm/parallel.hpp"
#include "zm/quadrature.hpp"
#include "zm/report.hpp"
#include "zm/spectral_data.hpp"

namespace zm {

// Smooth weight supported in [lo, hi] with 0 < lo < hi.
struct DivisorWeight {
    std::function<double(double)> w;
    double lo = 1.0;
    double hi = 2.0;
    std::string id;

    double operator()(double x) const { return (x <= lo || x >= hi) ? 0.0 : w(x); }
};

// exp(1 - 1/(1 - y^2)) with y mapping [lo, hi] onto [-1, 1]; peak value 1.
DivisorWeight bump_weight(double lo, double hi);
// Equal to 1 on [a, b], smooth steps of width eps on either side.
DivisorWeight mollified_indicator(double a, double b, double eps);

struct DivisorProblem {
    cplx lambda{};
    cplx mu{};
    std::int64_t shift_f = 1;
    DivisorWeight W;

    // f >= 1 and a weight support inside (0, inf)
    void validate() const;
    // validate() plus |Re lambda|, |Re mu| <= 0.2, the range where the kernel
    // integral is used as it stands.
    void validate_spectral() const;
};

// sum_{n <= n_max} sigma_lambda(n) sigma_mu(n + f) W(n / f). n_max must reach
// f * W.hi, otherwise std::domain_error ("support truncated"). Chunks of
// n are summed in a fixed order, so serial and parallel agree bit for bit.
cplx brute_force_sum(const DivisorProblem& prob, std::int64_t n_max, Exec exec = Exec::parallel);

enum class LambdaMethod { integral, mellin };

// Lambda_delta(u; nu; lambda, mu) = int_0^inf j_{lambda/2}(-delta v) j_nu(delta v / u) d^x v / v^((mu+1)/2).
// integral: the v-integral in x = sqrt v, panel by panel until it dies out.
// mellin: Parseval against the two Gamma-product transforms of j on a
// vertical line mid-strip, truncated where the Gamma decay has taken over.
cplx lambda_delta(double u, cplx nu, cplx lambda, cplx mu, int delta, LambdaMethod method = LambdaMethod::mellin,
                  const QuadratureSpec& spec = {});

// Real part of the abscissa used by the Mellin route; throws std::domain_error
// when the two strips do not overlap.
double lambda_delta_abscissa(cplx nu, cplx lambda, cplx mu, int delta);

// Psi_delta = int W(u) Lambda_delta(u) u^((lambda+mu)/2 + 1) d^x u, with a
// composite 15-point rule over `panels` equal pieces of the support of W
// (0: at least 8, and about one per oscillation of u^{2 nu} across the support).
cplx psi_delta(const DivisorProblem& prob, cplx nu, int delta, const QuadratureSpec& spec = {}, int panels = 0,
               Exec exec = Exec::parallel);

// H_V(s) at the two points the cuspidal term needs. The default goes through
// hecke_series (stored central value at 1/2, or the series for Re s > 1).
using HeckeProvider = std::function<cplx(const MaassFormRecord&, cplx)>;

struct DivisorFormContribution {
    std::string label;
    double t = 0.0;
    int eps = 1;
    double tau_f = 0.0;
    cplx H_minus{};  // H_V((1 - lambda - mu)/2)
    cplx H_plus{};   // H_V((1 + lambda - mu)/2)
    cplx psi_plus{};
    cplx psi_minus{};
    cplx contribution{};
};

struct DivisorCuspidalResult {
    cplx total{};
    std::vector<DivisorFormContribution> per_form;
};

// (1/4) f^((lambda+mu+1)/2) sum_V alpha_V tau_V(f) H_V((1-lambda-mu)/2) H_V((1+lambda-mu)/2)
//   (Psi_+ + eps_V Psi_-)(nu_V), in catalog order. A record with too few
// coefficients or no H value aborts with its label (std::invalid_argument).
DivisorCuspidalResult cuspidal_divisor_term(const Catalog& catalog, const DivisorProblem& prob,
                                            const QuadratureSpec& spec = {}, HeckeProvider H = {},
                                            Exec exec = Exec::parallel);

struct BruteForcePoint {
    std::int64_t n_max = 0;
    cplx value{};
    bool truncated = false;  // n_max stops inside the support of W(n/f)
};

struct DivisorReport {
    std::vector<BruteForcePoint> brute_force;  // n_max sweep
    DivisorCuspidalResult cuspidal;
    cplx lambda{}, mu{};
    std::int64_t shift_f = 1;
    std::string weight_id;
    bool well_conditioned = true;  // |lambda|, |mu| <= 0.05

    json to_json() const;
    std::string to_csv() const;  // part,label,re,im
};

DivisorReport divisor_report(const Catalog& catalog, const DivisorProblem& prob,
                             const std::vector<std::int64_t>& n_max_sweep, const QuadratureSpec& spec = {},
                             HeckeProvider H = {}, Exec exec = Exec::parallel);

}  // namespace zm
