#include "zm/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "zm/bessel_repr.hpp"
#include "zm/quadrature.hpp"
#include "zm/specfun.hpp"
#include "zm/zeta.hpp"

namespace zm {

namespace {

// e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}): 0 at t <= 0, 1 at t >= 1, C^infinity.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// log sin(pi z), evaluated so that large |Im z| neither overflows nor cancels.
// Only exp() of the result is used, so the branch does not matter.
cplx log_sin_pi(cplx z) {
    const cplx ipz = I * pi * z;
    if (z.imag() >= 0.0) return -ipz - std::log(2.0 * I) + std::log(std::exp(2.0 * ipz) - 1.0);
    return ipz - std::log(2.0 * I) + std::log(1.0 - std::exp(-2.0 * ipz));
}

cplx log_cos_pi(cplx z) { return log_sin_pi(z + 0.5); }

const double log_2pi = std::log(2.0 * pi);

// log of int_{-inf}^0 j_nu(u) |u|^{s-1} du
cplx log_mellin_negative(cplx nu, cplx s) {
    return -2.0 * s * log_2pi - std::log(pi) + log_cos_pi(nu) + loggamma(s + 0.5 + nu) + loggamma(s + 0.5 - nu);
}

// log of int_0^inf j_nu(u) u^{s-1} du
cplx log_mellin_positive(cplx nu, cplx s) {
    return I * pi - 2.0 * s * log_2pi - std::log(pi) + log_sin_pi(s) + loggamma(s + 0.5 + nu) +
           loggamma(s + 0.5 - nu);
}

void check_delta(int delta) {
    if (delta != 1 && delta != -1) throw std::invalid_argument("divisor: delta must be +1 or -1");
}

cplx lambda_mellin(double u, cplx nu, cplx lambda, cplx mu, int delta, const QuadratureSpec& spec) {
    const double sigma = lambda_delta_abscissa(nu, lambda, mu, delta);
    const cplx c = (mu + 1.0) / 2.0;
    const double lu = std::log(u);
    auto logf = [&](double tau) {
        cplx s(sigma, tau), w = -s - c;
        cplx l1 = delta == 1 ? log_mellin_negative(lambda / 2.0, s) : log_mellin_positive(lambda / 2.0, s);
        cplx l2 = delta == 1 ? log_mellin_positive(nu, w) : log_mellin_negative(nu, w);
        return l1 + l2 + w * lu;
    };
    // Both Gamma pairs together decay like e^{-pi |tau|} once |tau| is past the
    // imaginary parts of the parameters; stop 46 e-folds below the peak.
    const double bulk = std::abs(nu.imag()) + std::abs(lambda.imag()) / 2.0 + std::abs(mu.imag()) / 2.0 + 2.0;
    double peak = logf(0.0).real();
    double L = 0.0;
    for (;;) {
        L += 1.0;
        double a = logf(L).real(), b = logf(-L).real();
        peak = std::max({peak, a, b});
        if (L > bulk && std::max(a, b) < peak - 46.0) break;
        if (L > 4000.0) throw ConvergenceError("lambda_delta: Mellin integrand did not decay");
    }
    QuadratureSpec qs = spec;
    const int npanel = int(std::ceil(2.0 * L / 2.0));
    // Rounding floor. The loggamma phases are O(bulk log bulk), so their
    // absolute error, and the noise in f, grows roughly like eps * bulk.
    qs.abs_tol = std::max(1e-300, 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + bulk) * std::exp(peak));
    auto f = [&](double tau) { return std::exp(logf(tau)); };
    cplx total = 0.0;
    for (int k = 0; k < npanel; ++k) {
        double a = -L + 2.0 * k, b = std::min(L, a + 2.0);
        total += gauss_kronrod(f, {a, b}, qs).value;
    }
    return total / (2.0 * pi);
}

cplx lambda_integral(double u, cplx nu, cplx lambda, cplx mu, int delta, const QuadratureSpec& spec) {
    // v = x^2: d^x v / v^c = 2 x^{-2c-1} dx. One factor is of K type, so the
    // integrand dies exponentially; the first panel carries the x^{-|Re lambda|-Re mu}
    // endpoint behaviour and goes to the double-exponential rule.
    ReprOrderReal o1{lambda / 2.0}, o2{nu};
    const cplx pw = -(mu + 2.0);
    auto f = [&](double x) -> cplx {
        double v = x * x;
        if (v == 0.0) return 0.0;
        return 2.0 * j_real(o1, -delta * v) * j_real(o2, delta * v / u) * std::exp(pw * std::log(x));
    };
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-15);
    qs.rel_tol = std::min(spec.rel_tol, 1e-12);
    cplx total = double_exponential(f, {0.0, 0.25}, qs).value;
    double a = 0.25;
    int quiet = 0;
    while (quiet < 4) {
        cplx r = gauss_kronrod(f, {a, a + 0.25}, qs).value;
        total += r;
        quiet = std::abs(r) < 1e-16 * std::abs(total) ? quiet + 1 : 0;
        a += 0.25;
        if (a > 2000.0) throw ConvergenceError("lambda_delta: integrand did not decay");
    }
    return total;
}

// Nodes and weights of the composite 15-point rule on [lo, hi].
void composite_rule(double lo, double hi, int panels, std::vector<double>& x, std::vector<double>& w) {
    const Rule15& R = kronrod15();
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = lo + (p + 0.5) * h;
        for (int j = 0; j < 15; ++j) {
            x.push_back(mid + 0.5 * h * R.x[j]);
            w.push_back(0.5 * h * R.wk[j]);
        }
    }
}

cplx brute_force_range(const DivisorProblem& prob, std::int64_t n_lo, std::int64_t n_hi, Exec exec) {
    if (n_hi < n_lo) return 0.0;
    const std::int64_t chunk = 4096;
    const long nchunks = long((n_hi - n_lo) / chunk + 1);
    std::vector<cplx> part(nchunks);
    for_each_index(nchunks, exec, [&](long c) {
        std::int64_t a = n_lo + c * chunk, b = std::min(n_hi, a + chunk - 1);
        cplx s = 0.0;
        for (std::int64_t n = a; n <= b; ++n) {
            double w = prob.W(double(n) / double(prob.shift_f));
            if (w == 0.0) continue;
            s += divisor_function(n, prob.lambda) * divisor_function(n + prob.shift_f, prob.mu) * w;
        }
        part[c] = s;
    });
    cplx total = 0.0;
    for (auto v : part) total += v;
    return total;
}

std::int64_t support_end(const DivisorProblem& prob) {
    return std::int64_t(std::ceil(prob.W.hi * double(prob.shift_f)));
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

DivisorWeight bump_weight(double lo, double hi) {
    if (!(lo > 0.0 && hi > lo && std::isfinite(hi))) throw std::invalid_argument("bump_weight: need 0 < lo < hi");
    DivisorWeight W;
    W.lo = lo;
    W.hi = hi;
    W.w = [lo, hi](double x) {
        double y = (2.0 * x - lo - hi) / (hi - lo);
        double q = 1.0 - y * y;
        return q <= 0.0 ? 0.0 : std::exp(1.0 - 1.0 / q);
    };
    std::ostringstream id;
    id.precision(17);
    id << "bump:" << lo << ":" << hi;
    W.id = id.str();
    return W;
}

DivisorWeight mollified_indicator(double a, double b, double eps) {
    if (!(eps > 0.0 && a - eps > 0.0 && b > a && std::isfinite(b)))
        throw std::invalid_argument("mollified_indicator: need 0 < a - eps, a < b, eps > 0");
    DivisorWeight W;
    W.lo = a - eps;
    W.hi = b + eps;
    W.w = [a, b, eps](double x) {
        if (x < a) return smooth_step((x - (a - eps)) / eps);
        if (x > b) return smooth_step(((b + eps) - x) / eps);
        return 1.0;
    };
    std::ostringstream id;
    id.precision(17);
    id << "indicator:" << a << ":" << b << ":" << eps;
    W.id = id.str();
    return W;
}

void DivisorProblem::validate() const {
    if (shift_f < 1) throw std::invalid_argument("DivisorProblem: shift_f must be a positive integer");
    if (!W.w) throw std::invalid_argument("DivisorProblem: weight W is empty");
    if (!(W.lo > 0.0 && W.hi > W.lo && std::isfinite(W.hi)))
        throw std::invalid_argument("DivisorProblem: support of W must lie in (0, inf) and be bounded");
}

void DivisorProblem::validate_spectral() const {
    validate();
    if (std::abs(lambda.real()) > 0.2 || std::abs(mu.real()) > 0.2)
        throw std::domain_error("DivisorProblem: |Re lambda| and |Re mu| must be <= 0.2");
}

cplx brute_force_sum(const DivisorProblem& prob, std::int64_t n_max, Exec exec) {
    prob.validate();
    const std::int64_t end = support_end(prob);
    if (n_max < end)
        throw std::domain_error("brute_force_sum: support truncated, n_max = " + std::to_string(n_max) +
                                " < f * sup W = " + std::to_string(end));
    const std::int64_t lo = std::max<std::int64_t>(1, std::int64_t(std::floor(prob.W.lo * double(prob.shift_f))));
    return brute_force_range(prob, lo, end, exec);
}

double lambda_delta_abscissa(cplx nu, cplx lambda, cplx mu, int delta) {
    check_delta(delta);
    const double rl = std::abs(lambda.real()) / 2.0, rm = mu.real(), rn = std::abs(nu.real());
    double lo, hi;
    if (delta == 1) {
        lo = std::max(rl - 0.5, -0.25 - rm / 2.0);
        hi = -rm / 2.0 - rn;
    } else {
        lo = rl - 0.5;
        hi = std::min(-0.25, -rm / 2.0 - rn);
    }
    if (!(lo < hi)) throw std::domain_error("lambda_delta: the Mellin strips of the two factors do not overlap");
    return 0.5 * (lo + hi);
}

cplx lambda_delta(double u, cplx nu, cplx lambda, cplx mu, int delta, LambdaMethod method,
                  const QuadratureSpec& spec) {
    check_delta(delta);
    if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("lambda_delta: u must be positive");
    spec.validate();
    if (method == LambdaMethod::mellin) return lambda_mellin(u, nu, lambda, mu, delta, spec);
    return lambda_integral(u, nu, lambda, mu, delta, spec);
}

cplx psi_delta(const DivisorProblem& prob, cplx nu, int delta, const QuadratureSpec& spec, int panels, Exec exec) {
    prob.validate_spectral();
    check_delta(delta);
    if (panels < 0) throw std::invalid_argument("psi_delta: panels must be >= 0");
    if (panels == 0) {
        // Lambda oscillates like u^{+-2 nu}: about one oscillation per panel
        double osc = 2.0 * (std::abs(nu.imag()) + 1.0) * std::log(prob.W.hi / prob.W.lo) / pi;
        panels = std::max(8, int(std::ceil(osc)));
    }
    std::vector<double> x, w;
    composite_rule(prob.W.lo, prob.W.hi, panels, x, w);
    const cplx e = (prob.lambda + prob.mu) / 2.0;  // u^{e+1} d^x u = u^e du
    std::vector<cplx> term(x.size());
    for_each_index(long(x.size()), exec, [&](long i) {
        double Wu = prob.W(x[i]);
        if (Wu == 0.0) return;
        term[i] = w[i] * Wu * std::exp(e * std::log(x[i])) *
                  lambda_delta(x[i], nu, prob.lambda, prob.mu, delta, LambdaMethod::mellin, spec);
    });
    cplx total = 0.0;
    for (auto v : term) total += v;
    return total;
}

DivisorCuspidalResult cuspidal_divisor_term(const Catalog& catalog, const DivisorProblem& prob,
                                            const QuadratureSpec& spec, HeckeProvider H, Exec exec) {
    prob.validate_spectral();
    if (catalog.kind != CatalogKind::real)
        throw std::invalid_argument("cuspidal_divisor_term: expected a PSL2(Z) catalog");
    if (!H)
        H = [](const MaassFormRecord& r, cplx s) { return hecke_series(r, s).value; };
    const cplx s1 = (1.0 - prob.lambda - prob.mu) / 2.0, s2 = (1.0 + prob.lambda - prob.mu) / 2.0;
    const cplx pre = 0.25 * std::exp((prob.lambda + prob.mu + 1.0) / 2.0 * std::log(double(prob.shift_f)));
    DivisorCuspidalResult out;
    for (const auto& r : catalog.real) {
        if (!validate_hecke(r, 1e-6).all_pass())
            throw std::invalid_argument("cuspidal_divisor_term: record '" + r.label + "' fails Hecke validation at 1e-6");
        if (r.max_n() < prob.shift_f)
            throw std::invalid_argument("cuspidal_divisor_term: record '" + r.label + "' has no tau(" +
                                        std::to_string(prob.shift_f) + ")");
        DivisorFormContribution fc;
        fc.label = r.label;
        fc.t = r.t;
        fc.eps = r.eps;
        fc.tau_f = r.tau_at(long(prob.shift_f));
        auto get = [&](cplx s) {
            try {
                return H(r, s);
            } catch (const std::exception& ex) {
                std::ostringstream m;
                m << "cuspidal_divisor_term: record '" << r.label << "' has no H value at s = " << s.real()
                  << (s.imag() < 0 ? " - " : " + ") << std::abs(s.imag()) << "i (" << ex.what() << ")";
                throw std::invalid_argument(m.str());
            }
        };
        fc.H_minus = get(s1);
        fc.H_plus = get(s2);
        const cplx nu(0.0, r.t);
        fc.psi_plus = psi_delta(prob, nu, 1, spec, 0, exec);
        fc.psi_minus = psi_delta(prob, nu, -1, spec, 0, exec);
        fc.contribution = pre * r.alpha * fc.tau_f * fc.H_minus * fc.H_plus * (fc.psi_plus + double(r.eps) * fc.psi_minus);
        out.total += fc.contribution;
        out.per_form.push_back(std::move(fc));
    }
    return out;
}

json DivisorReport::to_json() const {
    json bf = json::array();
    for (const auto& b : brute_force)
        bf.push_back({{"n_max", b.n_max}, {"value", cplx_json(b.value)}, {"truncated", b.truncated}});
    json pf = json::array();
    for (const auto& f : cuspidal.per_form)
        pf.push_back({{"label", f.label},
                      {"t", f.t},
                      {"eps", f.eps},
                      {"tau_f", f.tau_f},
                      {"H_minus", cplx_json(f.H_minus)},
                      {"H_plus", cplx_json(f.H_plus)},
                      {"psi_plus", cplx_json(f.psi_plus)},
                      {"psi_minus", cplx_json(f.psi_minus)},
                      {"contribution", cplx_json(f.contribution)}});
    return json{{"lambda", cplx_json(lambda)},
                {"mu", cplx_json(mu)},
                {"shift_f", shift_f},
                {"weight_id", weight_id},
                {"well_conditioned", well_conditioned},
                {"brute_force", bf},
                {"cuspidal", cplx_json(cuspidal.total)},
                {"per_form", pf}};
}

std::string DivisorReport::to_csv() const {
    std::ostringstream o;
    o.precision(17);
    o << "part,label,re,im\n";
    for (const auto& b : brute_force)
        o << "brute_force,n_max=" << b.n_max << (b.truncated ? " (truncated)" : "") << "," << b.value.real() << ","
          << b.value.imag() << "\n";
    for (const auto& f : cuspidal.per_form)
        o << "cuspidal_form," << f.label << "," << f.contribution.real() << "," << f.contribution.imag() << "\n";
    o << "cuspidal,total," << cuspidal.total.real() << "," << cuspidal.total.imag() << "\n";
    return o.str();
}

DivisorReport divisor_report(const Catalog& catalog, const DivisorProblem& prob,
                             const std::vector<std::int64_t>& n_max_sweep, const QuadratureSpec& spec,
                             HeckeProvider H, Exec exec) {
    prob.validate_spectral();
    DivisorReport rep;
    rep.lambda = prob.lambda;
    rep.mu = prob.mu;
    rep.shift_f = prob.shift_f;
    rep.weight_id = prob.W.id;
    rep.well_conditioned = std::abs(prob.lambda) <= 0.05 && std::abs(prob.mu) <= 0.05;
    const std::int64_t end = support_end(prob);
    const std::int64_t lo = std::max<std::int64_t>(1, std::int64_t(std::floor(prob.W.lo * double(prob.shift_f))));
    for (auto n : n_max_sweep)
        rep.brute_force.push_back({n, brute_force_range(prob, lo, std::min(n, end), exec), n < end});
    rep.cuspidal = cuspidal_divisor_term(catalog, prob, spec, std::move(H), exec);
    return rep;
}

}  // namespace zm
