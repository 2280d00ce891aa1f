#include "zm/atkinson.hpp"

#include <cmath>
#include <sstream>

#include "zm/dd.hpp"
#include "zm/parallel.hpp"
#include "zm/specfun.hpp"

namespace zm {

double mean_value_direct(const LSelector& L, const Weight& g, const QuadratureSpec& spec) {
    spec.validate();
    L.validate();
    double T = spec.truncation_radius;
    if (T < 8.0 * g.delta)
        throw std::invalid_argument("mean_value_direct: truncation_radius must be at least 8 delta");
    QuadratureSpec ps = spec;
    ps.abs_tol = spec.abs_tol * 1e-3;
    auto f = [&](double t) {
        double m = std::norm(l_value(L, cplx(0.5, t)));
        if (L.power == 2) m *= m;
        return cplx(m * g(t).real(), 0.0);
    };
    // Unit panels keep |zeta|'s oscillation resolved; the integrand is even.
    int panels = static_cast<int>(std::ceil(T));
    double width = T / panels;
    cdd acc(0.0);
    for (int k = 0; k < panels; ++k) acc += cdd(gauss_kronrod(f, {k * width, (k + 1) * width}, ps).value);
    return 2.0 * acc.to_complex().real();
}

namespace {

// h(r) = (r(r+1))^(-1/2) g_c(log(1 + 1/r)), continued off the positive axis.
cplx atkinson_h(const Weight& g, cplx r, const QuadratureSpec& spec) {
    // g_c(log(1/r)) falls faster than any power of r as r -> 0
    if (std::abs(r) < 1e-150) return 0.0;
    cplx root = std::sqrt(r) * std::sqrt(r + 1.0);
    return transform_value(g, std::log(1.0 + 1.0 / r), spec) / root;
}

}  // namespace

double atkinson_n_integral(const Weight& g, int n, const QuadratureSpec& spec) {
    if (n < 1) throw std::invalid_argument("atkinson_n_integral: n must be positive");
    // cos = (e^+ + e^-)/2; e^{+2 pi i n r} decays on r = iy, e^- on r = -iy.
    // With y = x/(2 pi n) both become Laplace integrals against e^{-x}.
    double scale = 1.0 / (2.0 * pi * n);
    QuadratureSpec qs = spec;
    qs.abs_tol = 1e-300;
    cplx sum = 0.0;
    for (double dir : {1.0, -1.0}) {
        auto f = [&](double x) { return atkinson_h(g, cplx(0.0, dir * x * scale), spec) * std::exp(-x); };
        IntegralResult r = double_exponential(f, {0.0, INFINITY}, qs);
        sum += dir * I * scale * r.value;
    }
    cplx v = 0.5 * sum;
    // The two rays are complex conjugates of each other; anything left in the
    // imaginary part is quadrature error.
    if (std::abs(v.imag()) > 1e-10 * std::abs(v) + 1e-300)
        throw ConvergenceError("atkinson_n_integral: rotated rays disagree");
    return v.real();
}

std::vector<double> atkinson_terms(const Weight& g, int n_lo, int n_hi, const QuadratureSpec& spec, Exec exec) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("atkinson_terms: need 1 <= n_lo <= n_hi");
    std::vector<double> out(static_cast<std::size_t>(n_hi - n_lo + 1));
    for_each_index(static_cast<long>(out.size()), exec, [&](long i) {
        int n = n_lo + static_cast<int>(i);
        out[i] = 4.0 * double(divisor_count(n)) * atkinson_n_integral(g, n, spec);
    });
    return out;
}

AtkinsonBreakdown atkinson_explicit(const Weight& g, int n_max, const QuadratureSpec& spec) {
    spec.validate();
    if (n_max < 1) throw std::invalid_argument("atkinson_explicit: n_max must be positive");
    AtkinsonBreakdown b;
    b.weight_id = g.id;
    QuadratureSpec qs = spec;
    qs.abs_tol = 1e-300;
    const double c0 = 2.0 * euler_gamma - std::log(2.0 * pi);
    auto gam = [&](cplx arg_of_t(double)) {
        auto f = [&](double t) {
            double w = g(t).real();
            if (w == 0.0) return cplx(0.0);
            return cplx((digamma(arg_of_t(t)).real() + c0) * w, 0.0);
        };
        return 2.0 * double_exponential(f, {0.0, INFINITY}, qs).value.real();
    };
    b.gamma_term = gam([](double t) { return cplx(0.5, t); });
    b.alt_gamma_term = gam([](double t) { return cplx(0.25, 0.5 * t); });
    b.residue_term = 2.0 * pi * g(cplx(0.0, 0.5)).real();

    double main = b.gamma_term + b.residue_term;
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(main));
    std::vector<double> terms;
    auto extend = [&](int upto) {
        int from = static_cast<int>(terms.size()) + 1;
        if (upto < from) return;
        auto more = atkinson_terms(g, from, upto, spec);
        terms.insert(terms.end(), more.begin(), more.end());
    };
    auto partial = [&](std::size_t upto) {
        dd s(0.0);
        for (std::size_t i = 0; i < upto; ++i) s += dd(terms[i]);
        return double(s);
    };
    int N = std::min(16, n_max);
    extend(N);
    b.cauchy_delta = INFINITY;
    while (2 * N <= n_max) {
        extend(2 * N);
        b.cauchy_delta = std::fabs(partial(2 * N) - partial(N));
        N *= 2;
        if (b.cauchy_delta < tol / 4) {
            b.cauchy_ok = true;
            break;
        }
    }
    if (!b.cauchy_ok && N < n_max) {
        int prev = N;
        extend(n_max);
        N = n_max;
        b.cauchy_delta = std::fabs(partial(N) - partial(prev));
        b.cauchy_ok = b.cauchy_delta < tol / 4;
    }
    b.divisor_tail.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) b.divisor_tail.emplace_back(int(i) + 1, terms[i]);
    double tail = partial(terms.size());
    b.total = main + tail;
    b.alt_total = b.alt_gamma_term + b.residue_term + tail;
    return b;
}

json AtkinsonBreakdown::to_json() const {
    json tail = json::array();
    for (auto [n, v] : divisor_tail) tail.push_back(json::array({n, v}));
    return json{{"weight", weight_id},
                {"gamma_term", gamma_term},
                {"residue_term", residue_term},
                {"divisor_tail_sum", total - gamma_term - residue_term},
                {"total", total},
                {"alt_gamma_term", alt_gamma_term},
                {"alt_total", alt_total},
                {"n_terms", divisor_tail.size()},
                {"cauchy_delta", cauchy_delta},
                {"cauchy_ok", cauchy_ok},
                {"divisor_tail", std::move(tail)}};
}

std::string AtkinsonBreakdown::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,term,partial_sum\n";
    dd s(0.0);
    for (auto [n, v] : divisor_tail) {
        s += dd(v);
        os << n << ',' << v << ',' << double(s) << '\n';
    }
    return os.str();
}

PoissonFunction poisson_gaussian_pi() {
    return {"exp(-pi r^2)", [](double r) { return cplx(std::exp(-pi * r * r)); }, std::nullopt};
}

PoissonFunction poisson_gaussian_one() {
    return {"exp(-r^2)", [](double r) { return cplx(std::exp(-r * r)); }, std::nullopt};
}

PoissonFunction poisson_lorentz() {
    return {"1/(1+r^2)", [](double r) { return cplx(1.0 / (1.0 + r * r)); }, (pi / std::tanh(pi) - 1.0) / 2.0};
}

VerificationReport verify_poisson(const PoissonFunction& F, int n_max, const QuadratureSpec& spec, double tol) {
    spec.validate();
    if (n_max < 1) throw std::invalid_argument("verify_poisson: n_max must be positive");
    QuadratureSpec qs = spec;
    qs.abs_tol = 1e-18;
    qs.rel_tol = 1e-14;

    cplx lhs;
    std::string how;
    if (F.lhs_closed) {
        lhs = *F.lhs_closed;
        how = "closed";
    } else {
        if (std::abs(F.F(double(n_max))) > F.decay_check)
            throw std::domain_error("verify_poisson: F decays too slowly for a direct sum up to n_max");
        dd s(0.0);
        for (int n = n_max; n >= 1; --n) s += dd(F.F(double(n)).real());
        lhs = double(s);
        how = "direct";
    }

    double f0 = F.F(0.0).real();
    cplx whole = integrate(F.F, {0.0, INFINITY}, qs).value;
    // Cosine integrals are computed until two in a row sit at the rounding
    // floor of the panel sums.
    QuadratureSpec ps = qs;
    ps.abs_tol = 1e-17 * std::max(1.0, std::abs(whole));
    double floor = 1e-16 * std::max(1.0, std::abs(whole));
    dd cos_sum(0.0);
    int used = 0, quiet = 0;
    for (int n = 1; n <= n_max && quiet < 2; ++n) {
        auto f = [&](double r) { return F.F(r) * std::cos(2.0 * pi * n * r); };
        double v = integrate_oscillatory(f, 0.0, 1.0 / (2.0 * n), ps).value.real();
        cos_sum += dd(v);
        used = n;
        quiet = std::fabs(v) < floor ? quiet + 1 : 0;
    }
    cplx rhs = whole - 0.5 * f0 + 2.0 * double(cos_sum);
    cplx printed = whole + 2.0 * double(cos_sum);

    VerificationReport rep;
    rep.suite = "poisson";
    std::ostringstream note;
    note.precision(3);
    note << "without the -F(0)/2 endpoint term the residual is " << std::abs(lhs - printed);
    rep.add_relative("poisson_summation", json{{"F", F.name}, {"lhs", how}, {"n_used", used}}, lhs, rhs, tol,
                     note.str());
    return rep;
}

VerificationReport verify_cosine_mellin(const std::vector<cplx>& s_grid, const QuadratureSpec& spec, double tol) {
    VerificationReport rep;
    rep.suite = "cosine_mellin";
    for (cplx s : s_grid) {
        if (!(s.real() > 0.0 && s.real() < 1.0))
            throw std::domain_error("verify_cosine_mellin: need 0 < Re s < 1");
        Wave waves[] = {{[](cplx) { return cplx(0.5); }, 2.0 * pi}, {[](cplx) { return cplx(0.5); }, -2.0 * pi}};
        cplx lhs = mellin_numeric(std::span<const Wave>(waves), s, spec).value;
        cplx rhs = std::exp(-s * std::log(2.0 * pi)) * std::cos(pi * s / 2.0) * gamma(s);
        rep.add_relative("cosine_mellin", json{{"s", to_json(s)}}, lhs, rhs, tol);
    }
    return rep;
}

}  // namespace zm
