#include "zm/kirillov_real.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zm/bessel_repr.hpp"
#include "zm/parallel.hpp"
#include "zm/specfun.hpp"

namespace zm {

namespace {

cplx cpow(cplx base, cplx e) { return std::exp(e * std::log(base)); }

double sign_of(int p) { return (p % 2 == 0) ? 1.0 : -1.0; }

void check_u(double u, const char* who) {
    if (!std::isfinite(u)) throw std::invalid_argument(std::string(who) + ": u is not finite");
    if (u == 0.0) throw std::domain_error(std::string(who) + ": u must be nonzero");
}

cplx rgamma_checked(cplx z, const char* who) {
    if (is_nonpositive_integer(z)) throw PoleError(std::string(who) + ": Gamma(sgn(u) p + 1/2 + nu) has a pole");
    return rgamma(z);
}

// |u|^{-(nu-1/2)} A_u phi_p(a[y]) without the x, theta phases
cplx whittaker_part(int p, cplx nu, double u, double y) {
    int k = u > 0.0 ? p : -p;
    double arg = 4.0 * pi * std::abs(u) * y;
    if (arg < 1e-300 && std::abs(nu.real()) < 0.5) return 0.0;  // W ~ arg^{1/2 - |Re nu|}
    return sign_of(p) * std::exp((0.5 + nu) * std::log(pi)) * whittaker_w(double(k), nu, 4.0 * pi * std::abs(u) * y) *
           rgamma_checked(double(k) + 0.5 + nu, "jacquet_phi");
}

// Sum of Gauss-Kronrod panels [a + k, a + k + 1] until four in a row are
// negligible against the running total.
template <class F>
cplx panel_sum(F&& f, double a, const QuadratureSpec& qs) {
    cplx total = 0.0;
    int quiet = 0;
    for (int k = 0; k < 4000; ++k) {
        cplx part = gauss_kronrod(f, {a + k, a + k + 1.0}, qs).value;
        total += part;
        if (std::abs(part) <= 1e-17 * std::abs(total) || std::abs(part) < 1e-300) {
            if (++quiet >= 4) return total;
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError("panel sum: integrand does not decay");
}

// int_0^inf f(u) du with (0, 1] mapped by u = e^{-x}: the integrands here
// behave like u^{c + i t} at the origin, a damped wave in x.
template <class F>
cplx half_line(F&& f, const QuadratureSpec& qs) {
    auto g = [&](double x) -> cplx {
        double u = std::exp(-x);
        return u == 0.0 ? cplx(0.0) : f(u) * u;
    };
    return panel_sum(g, 0.0, qs) + panel_sum(f, 1.0, qs);
}

json nu_params(int p, cplx nu) { return json{{"p", p}, {"nu", to_json(nu)}}; }

}  // namespace

double PrincipalSeriesVector::norm() const {
    double s = 0.0;
    for (const auto& [p, c] : coefficients) s += std::norm(c);
    return std::sqrt(s);
}

cplx jacquet_phi(int p, cplx nu, double u, GroupCoords g) {
    check_u(u, "jacquet_phi");
    if (!(g.y > 0.0)) throw std::domain_error("jacquet_phi: y must be positive");
    cplx phase = std::exp(I * (2.0 * pi * u * g.x + 2.0 * p * g.theta));
    return cpow(std::abs(u), nu - 0.5) * phase * whittaker_part(p, nu, u, g.y);
}

cplx jacquet_phi_integral(int p, cplx nu, double u, GroupCoords g, const QuadratureSpec& spec) {
    check_u(u, "jacquet_phi_integral");
    if (!(g.y > 0.0)) throw std::domain_error("jacquet_phi_integral: y must be positive");
    const double omega = 2.0 * pi * g.y * u;
    // (v^2+1)^{-1/2-nu} ((v+i)/(v-i))^p, analytic off the imaginary segment [-i, i] extended
    // sgn = -1 gives the value at -v, so both tails use logs with Re v > 0
    auto amp = [&](cplx v, double sgn = 1.0) {
        cplx lm = std::log(v - I), lp = std::log(v + I);
        return std::exp(-(0.5 + nu) * (lm + lp) + sgn * double(p) * (lp - lm));
    };
    const double a = 2.0;
    IntegralResult head = gauss_kronrod(
        [&](double v) { return (v >= 0.0 ? amp(v) : amp(-v, -1.0)) * std::exp(I * (omega * v)); }, {-a, a}, spec);
    int up = omega > 0.0 ? 1 : -1;
    // v in [a, inf) and v -> -v on (-inf, -a]
    std::array<Piece, 2> pieces{
        Piece{[&](cplx v) { return amp(v) * std::exp(I * omega * v); }, up},
        Piece{[&](cplx v) { return amp(v, -1.0) * std::exp(-I * omega * v); }, -up},
    };
    head += integrate_rotated(pieces, a, spec);
    cplx phase = std::exp(I * (2.0 * pi * u * g.x + 2.0 * p * g.theta));
    return cpow(g.y, 0.5 - nu) * phase * head.value;
}

VerificationReport verify_jacquet_phi(int p, cplx nu, double u, GroupCoords g, const QuadratureSpec& spec, double tol) {
    VerificationReport rep;
    rep.suite = "jacquet_phi";
    json params = nu_params(p, nu);
    params["u"] = u;
    params["x"] = g.x;
    params["y"] = g.y;
    params["theta"] = g.theta;
    rep.add_relative("jacquet_integral_vs_whittaker", params, jacquet_phi_integral(p, nu, u, g, spec),
                     jacquet_phi(p, nu, u, g), tol);
    return rep;
}

cplx kirillov_basis(int p, cplx nu, double u) {
    check_u(u, "kirillov_transform");
    return whittaker_part(p, nu, u > 0.0 ? 1.0 : -1.0, std::abs(u));
}

cplx kirillov_transform(const PrincipalSeriesVector& phi, double u) {
    check_u(u, "kirillov_transform");
    cplx acc = 0.0;
    for (const auto& [p, c] : phi.coefficients)
        if (c != 0.0) acc += c * kirillov_basis(p, phi.nu, u);
    return acc;
}

cplx kirillov_inner(int p, int q, cplx nu, const QuadratureSpec& spec) {
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-16);
    cplx total = 0.0;
    for (double sg : {1.0, -1.0}) {
        auto f = [&](double t) -> cplx {
            if (t == 0.0) return 0.0;
            return kirillov_basis(p, nu, sg * t) * std::conj(kirillov_basis(q, nu, sg * t)) / t;
        };
        total += half_line(f, qs);
    }
    return total * MeasureConvention::real_factor;
}

double kirillov_norm2(const PrincipalSeriesVector& phi, const QuadratureSpec& spec) {
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-16);
    double total = 0.0;
    for (double sg : {1.0, -1.0}) {
        auto f = [&](double t) -> cplx { return t == 0.0 ? 0.0 : std::norm(kirillov_transform(phi, sg * t)) / t; };
        total += half_line(f, qs).real();
    }
    return total * MeasureConvention::real_factor;
}

cplx whittaker_orthogonality_closed(cplx lambda, cplx mu, cplx nu) {
    if (lambda == mu) throw std::domain_error("whittaker orthogonality: lambda = mu is a pole of the closed form");
    cplx s2 = std::sin(2.0 * pi * nu);
    if (std::abs(s2) < 1e-300) throw std::domain_error("whittaker orthogonality: sin(2 pi nu) = 0");
    cplx a = rgamma(0.5 - lambda + nu) * rgamma(0.5 - mu - nu);
    cplx b = rgamma(0.5 - lambda - nu) * rgamma(0.5 - mu + nu);
    return pi / ((lambda - mu) * s2) * (a - b);
}

VerificationReport verify_whittaker_orthogonality(cplx lambda, cplx mu, cplx nu, const QuadratureSpec& spec,
                                                  double tol) {
    if (!(std::abs(nu.real()) < 0.5)) throw std::domain_error("whittaker orthogonality: needs |Re nu| < 1/2");
    cplx closed = whittaker_orthogonality_closed(lambda, mu, nu);
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-16);
    auto f = [&](double u) -> cplx {
        if (u == 0.0) return 0.0;
        return whittaker_w(lambda, nu, u) * whittaker_w(mu, nu, u) / u;
    };
    cplx numeric = half_line(f, qs);
    VerificationReport rep;
    rep.suite = "whittaker_orthogonality";
    json params{{"lambda", to_json(lambda)}, {"mu", to_json(mu)}, {"nu", to_json(nu)}};
    // the two Gamma terms can cancel exactly (e.g. lambda = -mu = 1, nu = 1/4);
    // then only an absolute residual on the scale of the terms means anything
    cplx pre = pi / ((lambda - mu) * std::sin(2.0 * pi * nu));
    double scale = std::abs(pre) * (std::abs(rgamma(0.5 - lambda + nu) * rgamma(0.5 - mu - nu)) +
                                    std::abs(rgamma(0.5 - lambda - nu) * rgamma(0.5 - mu + nu)));
    if (std::abs(closed) < 1e-8 * scale) {
        rep.add_absolute("whittaker_orthogonality", params, numeric / scale, closed / scale, tol,
                         "closed form vanishes; residual relative to the size of its terms");
    } else {
        rep.add_relative("whittaker_orthogonality", params, numeric, closed, tol);
    }
    return rep;
}

cplx gamma_p(int p, cplx nu, cplx s, const QuadratureSpec& spec) {
    if (!(s.real() > std::abs(nu.real())))
        throw std::domain_error("gamma_p: the defining integral needs Re s > |Re nu|");
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-300);
    // A_u phi_p(1) u^{s-nu-1} = u^{s-3/2} (whittaker part)
    auto f = [&](double u) -> cplx {
        if (u == 0.0) return 0.0;
        return cpow(u, s - 1.5) * whittaker_part(p, nu, u, 1.0);
    };
    return half_line(f, qs);
}

VerificationReport verify_jl_functional_equation(int p, cplx nu, cplx s, const QuadratureSpec& spec, double tol) {
    double rn = std::abs(nu.real());
    if (!(s.real() > rn && 1.0 - s.real() > rn))
        throw std::domain_error("jl functional equation: needs |Re nu| < Re s < 1 - |Re nu|");
    cplx lhs = sign_of(p) * gamma_p(p, nu, s, spec);
    cplx pre = std::exp((1.0 - 2.0 * s) * std::log(2.0) - 2.0 * s * std::log(pi)) * gamma(s + nu) * gamma(s - nu);
    cplx rhs = pre * (std::cos(pi * s) * gamma_p(p, nu, 1.0 - s, spec) + std::cos(pi * nu) * gamma_p(-p, nu, 1.0 - s, spec));
    VerificationReport rep;
    rep.suite = "jl_functional_equation";
    json params = nu_params(p, nu);
    params["s"] = to_json(s);
    rep.add_relative("jl_functional_equation", params, lhs, rhs, tol);
    return rep;
}

VerificationReport verify_hankel_eigenrelation(int p, cplx nu, double u, const QuadratureSpec& spec, double tol) {
    check_u(u, "verify_hankel_eigenrelation");
    if (nu.real() != 0.0) throw std::domain_error("verify_hankel_eigenrelation: nu must be purely imaginary");
    ReprOrderReal ord{nu, SingularityPolicy::limit};
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-16);
    // K phi_p decays like e^{-2 pi |v|}; the j factor only oscillates like cos(4 pi sqrt|uv|),
    // so plain double exponential quadrature on each half line suffices.
    cplx rhs = 0.0;
    for (double sg : {1.0, -1.0}) {
        auto f = [&](double t) -> cplx {
            if (t == 0.0) return 0.0;
            double v = sg * t;
            return j_real(ord, u * v) * kirillov_basis(p, nu, v) / t;
        };
        rhs += half_line(f, qs);
    }
    cplx lhs = sign_of(p) * kirillov_basis(p, nu, u);
    VerificationReport rep;
    rep.suite = "hankel_eigenrelation";
    json params = nu_params(p, nu);
    params["u"] = u;
    auto& c = rep.add_relative("hankel_eigenrelation", params, lhs, rhs, tol);
    c.note = "with (1/pi) d^x v: residual " + std::to_string(rel_diff(lhs, rhs / pi));
    return rep;
}

VerificationReport verify_hankel_grid(const std::vector<int>& ps, const std::vector<cplx>& nus,
                                      const std::vector<double>& us, const QuadratureSpec& spec, double tol,
                                      Exec exec) {
    struct Point { int p; cplx nu; double u; };
    std::vector<Point> pts;
    for (int p : ps)
        for (cplx nu : nus)
            for (double u : us) pts.push_back({p, nu, u});
    std::vector<VerificationReport> parts(pts.size());
    for_each_index(long(pts.size()), exec, [&](long i) {
        parts[i] = verify_hankel_eigenrelation(pts[i].p, pts[i].nu, pts[i].u, spec, tol);
    });
    VerificationReport rep;
    rep.suite = "hankel_eigenrelation";
    for (const auto& r : parts) rep.append(r);
    return rep;
}

}  // namespace zm
