#include "zm/moment4.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "zm/atkinson.hpp"
#include "zm/bessel_repr.hpp"
#include "zm/parallel.hpp"
#include "zm/specfun.hpp"
#include "zm/zeta.hpp"

namespace zm {

namespace {

void require_imaginary(cplx nu, const char* who) {
    if (nu.real() != 0.0 || !std::isfinite(nu.imag()))
        throw std::invalid_argument(std::string(who) + ": nu must be purely imaginary");
}

// ---- Theta cache -------------------------------------------------------------

using CacheKey = std::tuple<int, int, double, std::string, double, double, double, std::string>;

struct ThetaCache {
    std::shared_mutex mu;
    std::map<CacheKey, double> values;
    std::uint64_t hits = 0, misses = 0;

    std::optional<double> find(const CacheKey& k) {
        std::shared_lock lock(mu);
        auto it = values.find(k);
        if (it == values.end()) return std::nullopt;
        return it->second;
    }
    void insert(const CacheKey& k, double v) {
        std::unique_lock lock(mu);
        values.emplace(k, v);
    }
};

ThetaCache& cache() {
    static ThetaCache c;
    return c;
}

CacheKey real_key(cplx nu, const Weight& g, const QuadratureSpec& spec) {
    return {0, 0, std::abs(nu.imag()), g.id, spec.abs_tol, spec.rel_tol, spec.truncation_radius, ""};
}

// Weights without an id cannot be told apart, so they bypass the cache.
bool cacheable(const Weight& g) { return !g.id.empty(); }

std::mutex stats_mu;
void count(bool hit) {
    std::lock_guard lock(stats_mu);
    (hit ? cache().hits : cache().misses)++;
}

// V(t) = u^{-1/2-it} Gamma(1/2+it)^2 / Gamma(1+2it) 2F1(1/2+it, 1/2+it; 1+2it; -1/u)
cplx xi_v(double u, double t) {
    cplx nu(0.0, t), a = 0.5 + nu;
    cplx lg = -a * std::log(u) + 2.0 * loggamma(a) - loggamma(1.0 + 2.0 * nu);
    return std::exp(lg) * hyp2f1(a, a, 1.0 + 2.0 * nu, -1.0 / u);
}

double xi_closed(double u, double t) {
    t = std::abs(t);
    // Xi = 2 (Re V - Im V / sinh(pi t)); the quotient is even in t and is
    // continued below t = 1e-3 by a fit in t^2.
    constexpr double t1 = 1e-3, t2 = 2e-3;
    cplx v = xi_v(u, t);
    double q;
    if (t >= t1) {
        q = v.imag() / std::sinh(pi * t);
    } else {
        double f1 = xi_v(u, t1).imag() / std::sinh(pi * t1);
        double f2 = xi_v(u, t2).imag() / std::sinh(pi * t2);
        double b = (f2 - f1) / (t2 * t2 - t1 * t1);
        q = f1 + b * (t * t - t1 * t1);
    }
    return 2.0 * (v.real() - q);
}

double xi_integral(double u, cplx nu, const QuadratureSpec& spec) {
    // v = +-x^2; j_0(-v) j_nu(v/u) d^x v / sqrt|v| = 2 j_0(-v) j_nu(v/u) dx / x^2.
    // One factor is always of K type, so the integrand dies exponentially;
    // panels of width 1/4 until four in a row are negligible.
    ReprOrderReal o0{0.0}, on{nu};
    QuadratureSpec qs = spec;
    qs.abs_tol = std::min(spec.abs_tol, 1e-15);
    qs.rel_tol = std::min(spec.rel_tol, 1e-12);
    cplx total = 0.0;
    for (int sgn : {1, -1}) {
        auto f = [&](double x) -> cplx {
            double v = sgn * x * x;
            return 2.0 * j_real(o0, -v) * j_real(on, v / u) / (x * x);
        };
        double a = 0.0;
        int quiet = 0;
        cplx part = 0.0;
        while (quiet < 4) {
            cplx r = gauss_kronrod(f, {a, a + 0.25}, qs).value;
            part += r;
            quiet = std::abs(r) < 1e-16 * std::abs(part) ? quiet + 1 : 0;
            a += 0.25;
            if (a > 2000.0) throw ConvergenceError("xi_real: integrand did not decay");
        }
        total += part;
    }
    return total.real();
}

// ---- Mellin-Barnes pieces of the complex kernel ---------------------------

cplx bernoulli_poly(int k, cplx x) {
    static const double B[15] = {1.0,       -0.5, 1.0 / 6, 0.0, -1.0 / 30, 0.0, 1.0 / 42,         0.0,
                                 -1.0 / 30, 0.0,  5.0 / 66, 0.0, -691.0 / 2730, 0.0, 7.0 / 6};
    cplx s = 0.0;
    double c = 1.0;  // binomial(k, j)
    for (int j = 0; j <= k; ++j) {
        s += c * B[j] * std::pow(x, k - j);
        c = c * (k - j) / (j + 1);
    }
    return s;
}

// log Gamma(z + a) - log Gamma(z + b); far out, the difference is taken from
// its asymptotic series so the two large logs never cancel.
cplx lgratio(cplx z, cplx a, cplx b) {
    double R = std::max(40.0, 6.0 * std::max(std::abs(a), std::abs(b)));
    if (std::abs(z) < R) return loggamma(z + a) - loggamma(z + b);
    cplx s = (a - b) * std::log(z), zi = 1.0 / z, pw = zi;
    for (int n = 1; n <= 12; ++n) {
        s += ((n % 2) ? 1.0 : -1.0) * (bernoulli_poly(n + 1, a) - bernoulli_poly(n + 1, b)) / double(n * (n + 1)) *
             pw;
        pw *= zi;
    }
    return s;
}

double parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// The eight Gamma arguments of Phi_m(s) (z = s/4) with their signs in the
// ratio: +1 numerator, -1 denominator.
struct PhiArgs {
    cplx w[8];
};
PhiArgs phi_args(int m, int p, cplx nu, cplx z) {
    double A = std::abs(m), al = std::abs(p + m), be = std::abs(p - m);
    return {{z + A / 2.0, z + A / 2.0, -z + 0.5 + (al + nu) / 2.0, -z + 0.5 + (be - nu) / 2.0,
             z + 0.5 + (al - nu) / 2.0, z + 0.5 + (be + nu) / 2.0, -z + 1.0 + A / 2.0, -z + 1.0 + A / 2.0}};
}

// Phi_{m2} / Phi_{m1} for |m2 - m1| = 2: every Gamma argument moves by -1, 0
// or +1, so the ratio is rational.
cplx phi_step(int m1, int m2, int p, cplx nu, cplx z) {
    PhiArgs a = phi_args(m1, p, nu, z), b = phi_args(m2, p, nu, z);
    cplx num = 1.0, den = 1.0;
    for (int i = 0; i < 8; ++i) {
        double d = std::round((b.w[i] - a.w[i]).real());
        cplx f = d > 0.5 ? a.w[i] : (d < -0.5 ? 1.0 / (a.w[i] - 1.0) : cplx(1.0));
        if (i < 4)
            num *= f;
        else
            den *= f;
    }
    return num / den;
}

// ---- per-weight transform for the complex Theta ---------------------------

struct ComplexTransform {
    int m_max = 0;
    std::vector<double> tau, wt;        // tau >= 0; the mirrored node is implicit
    std::vector<std::vector<cplx>> Wt;  // [k][m] = int What_m(e^x) e^{-x(1 + i tau_k)/2} dx
    std::vector<std::vector<double>> What;  // [m][j] on the x grid, kept for the direct form
    double x_lo = 0.0, h = 0.0;
};

double grid_x_lo(const Weight& g) { return -std::max(12.0, 7.0 / g.delta); }

std::shared_ptr<const ComplexTransform> build_transform(const Weight& g, const QuadratureSpec& spec,
                                                        const ComplexThetaGrid& grid) {
    auto T = std::make_shared<ComplexTransform>();
    T->m_max = grid.m_max;
    T->h = grid.h;
    T->x_lo = grid_x_lo(g);
    const int NX = int(std::floor((grid.x_hi - T->x_lo) / grid.h)) + 1;
    const int NT = grid.n_angle, M = grid.m_max;
    auto gc = [&](double x) { return transform_value(g, cplx(x), spec).real(); };

    // What_m(rho) = int_0^{2 pi} W(rho e^{i theta}) cos(m theta) d theta,
    // W(u) = |u|/|u+1| g_c(2 log|1 + 1/u|); W vanishes to all orders at u = -1.
    T->What.assign(M + 1, std::vector<double>(NX));
    for_each_index(NX, Exec::parallel, [&](long j) {
        double x = T->x_lo + j * grid.h, rho = std::exp(x);
        std::vector<double> acc(M + 1, 0.0);
        for (int k = 0; k < NT; ++k) {
            double th = 2.0 * pi * (k + 0.5) / NT;
            double c1 = std::cos(th);
            double d = std::abs(std::polar(rho, th) + 1.0);
            double w = d > 0.0 ? rho / d * gc(2.0 * std::log(d / rho)) : 0.0;
            if (w == 0.0) continue;
            double cm = 1.0, cp = c1;
            acc[0] += w;
            for (int m = 1; m <= M; ++m) {
                acc[m] += w * cp;
                double cn = 2.0 * c1 * cp - cm;
                cm = cp;
                cp = cn;
            }
        }
        for (int m = 0; m <= M; ++m) T->What[m][j] = acc[m] * 2.0 * pi / NT;
    });

    static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
                                   0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
                                   0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    const double pw = grid.tau_panel;
    for (double a = 0.0; a < grid.tau_max - 1e-12; a += pw)
        for (int k = 0; k < 8; ++k)
            for (int s : {-1, 1}) {
                T->tau.push_back(a + pw / 2.0 * (1.0 + s * gl_x[k]));
                T->wt.push_back(pw / 2.0 * gl_w[k]);
            }
    const long NTau = long(T->tau.size());
    T->Wt.assign(NTau, std::vector<cplx>(M + 1));
    for_each_index(NTau, Exec::parallel, [&](long k) {
        std::vector<cplx> e(NX);
        for (int j = 0; j < NX; ++j) {
            double x = T->x_lo + j * grid.h;
            e[j] = std::exp(-x * cplx(1.0, T->tau[k]) / 2.0) * grid.h;
        }
        for (int m = 0; m <= M; ++m) {
            cplx s = 0.0;
            const auto& row = T->What[m];
            for (int j = 0; j < NX; ++j) s += row[j] * e[j];
            T->Wt[k][m] = s;
        }
    });
    return T;
}

std::shared_ptr<const ComplexTransform> transform_for(const Weight& g, const QuadratureSpec& spec,
                                                      const ComplexThetaGrid& grid) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const ComplexTransform>> store;
    if (!cacheable(g)) return build_transform(g, spec, grid);
    std::string key = g.id + "|" + grid.key();
    std::lock_guard lock(mu);
    auto it = store.find(key);
    if (it != store.end()) return it->second;
    auto T = build_transform(g, spec, grid);
    store.emplace(key, T);
    return T;
}

void validate_grid(const ComplexThetaGrid& grid) {
    if (!(grid.h > 0.0) || !(grid.x_hi > 0.0) || grid.n_angle < 8 || grid.m_max < 0 || !(grid.tau_max > 0.0) ||
        !(grid.tau_panel > 0.0))
        throw std::invalid_argument("ComplexThetaGrid: bad discretisation parameters");
}

// Swapped form: sum_m c_m 8 int_R Phi_m(1 + i tau) Wt_m(1 + i tau) d tau.
cplx theta_int_swapped(int p, cplx nu, const ComplexTransform& T, int m_cut) {
    const int M = std::min(m_cut, T.m_max);
    const int P = std::abs(p);
    const long NTau = long(T.tau.size());
    std::vector<cplx> per_node(NTau);
    for_each_index(NTau, Exec::parallel, [&](long k) {
        std::vector<cplx> phi(2 * M + 1);
        cplx acc = 0.0;
        for (int sg : {1, -1}) {
            double tau = sg * T.tau[k];
            cplx s(1.0, tau), z = s / 4.0;
            for (int m = -std::min(M, 1); m <= std::min(M, 1); ++m)
                phi[m + M] = std::exp(xi_complex_log_phi(m, p, nu, s));
            // Once |m| >= |p| every Gamma argument moves by +1 per step of two;
            // that ratio is written out directly, cheaper than the
            // generic step.
            const cplx zp = 0.5 - z, zm = 0.5 + z;
            for (int m = 2; m <= M; ++m)
                for (int sg : {1, -1}) {
                    int from = sg * (m - 2), to = sg * m;
                    cplx r;
                    if (m - 2 >= P) {
                        double A = m - 2, al = std::abs(p + from), be = std::abs(p - from);
                        cplx a = z + A / 2.0, b = 1.0 - z + A / 2.0;
                        r = a * a * (zp + (al + nu) / 2.0) * (zp + (be - nu) / 2.0) /
                            ((zm + (al - nu) / 2.0) * (zm + (be + nu) / 2.0) * b * b);
                    } else {
                        r = phi_step(from, to, p, nu, z);
                    }
                    phi[to + M] = phi[from + M] * r;
                }
            for (int m = -M; m <= M; ++m) {
                cplx w = T.Wt[k][std::abs(m)];
                if (sg < 0) w = std::conj(w);
                acc += parity(std::max(P, std::abs(m))) * phi[m + M] * w;
            }
        }
        per_node[k] = T.wt[k] * acc;
    });
    cplx total = 0.0;
    for (auto v : per_node) total += v;
    return 8.0 * total;
}

cplx theta_int_direct(int p, cplx nu, const Weight& g, const QuadratureSpec& spec, const ComplexThetaGrid& grid,
                      int m_cut) {
    // sum_m c_m 32 pi^3 int e^{-x} What_m(e^x) I_m(e^{x/2}) dx, adaptive in x
    // with What_m from its own angular trapezoid at each x. Each I_m has a
    // non-smooth point at a = 1, hence the break at x = 0. The range stops at
    // x = 30, where the rest is below 1e-11 relative.
    const int M = m_cut, P = std::abs(p);
    auto gc = [&](double x) { return transform_value(g, cplx(x), spec).real(); };
    auto f = [&](double x) -> cplx {
        double rho = std::exp(x);
        std::vector<double> w(M + 1, 0.0);
        for (int k = 0; k < grid.n_angle; ++k) {
            double th = 2.0 * pi * (k + 0.5) / grid.n_angle;
            double d = std::abs(std::polar(rho, th) + 1.0);
            double v = d > 0.0 ? rho / d * gc(2.0 * std::log(d / rho)) : 0.0;
            for (int m = 0; m <= M; ++m) w[m] += v * std::cos(m * th);
        }
        cplx acc = 0.0;
        for (int m = -M; m <= M; ++m) {
            double wm = w[std::abs(m)] * 2.0 * pi / grid.n_angle;
            if (wm == 0.0) continue;
            acc += parity(std::max(P, std::abs(m))) * wm * xi_complex_mode(m, p, nu, std::exp(x / 2.0), spec);
        }
        return acc * std::exp(-x);
    };
    QuadratureSpec qs = spec;
    qs.rel_tol = std::max(spec.rel_tol, 1e-10);
    const double lo = grid_x_lo(g);
    cplx total = 0.0;
    for (auto [a, b] : {std::pair{lo, -1.0}, {-1.0, 0.0}, {0.0, 1.0}, {1.0, 30.0}})
        total += gauss_kronrod(f, {a, b}, qs).value;
    return 32.0 * pi * pi * pi * total;
}

double complex_prefactor(double t) {
    // nu / (16 sin pi nu) at nu = it
    if (t == 0.0) return 1.0 / (16.0 * pi);
    return t / (16.0 * std::sinh(pi * t));
}

// ---- panel integration with batched evaluations ---------------------------

struct PanelSum {
    double value = 0.0;
    double err = 0.0;
    int panels = 0;
};

// GK15 on every panel of the knot list; f_batch maps a list of abscissae to
// integrand values. Panels whose Kronrod-Gauss gap exceeds the tolerance are
// bisected and re-evaluated.
template <class Batch>
PanelSum integrate_panels(const std::vector<double>& knots, Batch&& f_batch, double rel_tol, double abs_floor,
                          int depth = 0) {
    const Rule15& R = kronrod15();
    const std::size_t np = knots.size() - 1;
    std::vector<double> xs;
    xs.reserve(np * 15);
    for (std::size_t i = 0; i < np; ++i) {
        double c = 0.5 * (knots[i] + knots[i + 1]), h = 0.5 * (knots[i + 1] - knots[i]);
        for (int j = 0; j < 15; ++j) xs.push_back(c + h * R.x[j]);
    }
    std::vector<double> fx = f_batch(xs);
    PanelSum out;
    for (std::size_t i = 0; i < np; ++i) {
        double h = 0.5 * (knots[i + 1] - knots[i]);
        double k = 0.0, g = 0.0;
        for (int j = 0; j < 15; ++j) {
            k += R.wk[j] * fx[i * 15 + j];
            g += R.wg[j] * fx[i * 15 + j];
        }
        k *= h;
        g *= h;
        double err = std::abs(k - g);
        if (err > std::max(rel_tol * std::abs(k), abs_floor) && depth < 12) {
            double mid = knots[i] + h;
            PanelSum sub = integrate_panels(std::vector<double>{knots[i], mid, knots[i + 1]}, f_batch, rel_tol,
                                            abs_floor / 2.0, depth + 1);
            out.value += sub.value;
            out.err += sub.err;
            out.panels += sub.panels;
        } else {
            out.value += k;
            out.err += err;
            out.panels += 1;
        }
    }
    return out;
}

// Knots from a to b, at most half a Gram spacing apart and never wider than 1.
std::vector<double> gram_knots(double a, double b) {
    std::vector<double> k{a};
    double t = a;
    while (t < b - 1e-12) {
        double w = 1.0;
        if (t > 2.0 * pi * std::exp(1.0)) w = std::min(1.0, pi / std::log(t / (2.0 * pi)));
        t = std::min(b, t + w);
        k.push_back(t);
    }
    return k;
}

double real_eis_density(double t, double theta) {
    double z6 = std::pow(std::abs(riemann_zeta(cplx(0.5, t))), 6);
    double z1 = std::norm(riemann_zeta(cplx(1.0, 2.0 * t)));
    return z6 / z1 * theta / (2.0 * pi);
}

double gauss_eis_density(int p, double t, double theta) {
    double z6 = std::pow(std::abs(hecke_zeta_gaussian(cplx(0.5, 0.5 * t), p)), 6);
    double z1 = std::norm(hecke_zeta_gaussian(cplx(1.0, t), 2 * p));
    return z6 / z1 * theta / (2.0 * pi);
}

// Integral over [0, inf) (or [0, T] when T > 0) of a batched integrand, in
// blocks of four panels; stops once two consecutive panels add less than
// 1e-16 of the running total.
template <class Batch>
std::pair<PanelSum, double> integrate_to_decay(Batch&& f_batch, double T, double rel_tol, double quiet_rel = 1e-16) {
    PanelSum total;
    double a = 0.0;
    int quiet = 0;
    const double stop = T > 0.0 ? T : 400.0;
    while (a < stop && (T > 0.0 || quiet < 2)) {
        auto knots = gram_knots(a, std::min(stop, a + 4.0));
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            PanelSum ps = integrate_panels(std::vector<double>{knots[i], knots[i + 1]}, f_batch, rel_tol,
                                           0.1 * quiet_rel * std::abs(total.value));
            total.value += ps.value;
            total.err += ps.err;
            total.panels += ps.panels;
            quiet = (std::abs(ps.value) <= quiet_rel * std::abs(total.value) && a > 0.0) ? quiet + 1 : 0;
            a = knots[i + 1];
            if (T <= 0.0 && quiet >= 2) break;
        }
    }
    if (T <= 0.0 && quiet < 2) throw ConvergenceError("Eisenstein integral: integrand did not decay by t = 400");
    return {total, a};
}

// I_m(a) for a > 1 as minus the sum of residues at the right poles of
// Phi(s) a^{-s}: s = 4(c1 + k) and s = 4(c2 + k), simple while nu != 0. The
// series is geometric in a^{-4}.
cplx mode_residues(int m, int p, cplx nu, double a) {
    const double A = std::abs(m), al = std::abs(p + m), be = std::abs(p - m);
    const cplx c1 = 0.5 + (al + nu) / 2.0, c2 = 0.5 + (be - nu) / 2.0;
    const cplx d1 = 0.5 + (al - nu) / 2.0, d2 = 0.5 + (be + nu) / 2.0;
    const double la = std::log(a);
    cplx sum = 0.0;
    for (int fam = 0; fam < 2; ++fam) {
        cplx c = fam == 0 ? c1 : c2, other = fam == 0 ? c2 : c1;
        double lfact = 0.0;  // log k!
        int small = 0;
        for (int k = 0; k < 400; ++k) {
            if (k > 0) lfact += std::log(double(k));
            cplx z = c + double(k);
            cplx l = 2.0 * loggamma(z + A / 2.0) + loggamma(other - z) - lfact - 4.0 * z * la - 4.0 * std::log(2.0);
            cplx r = std::exp(l) * rgamma(z + d1) * rgamma(z + d2) * rgamma(1.0 + A / 2.0 - z) *
                     rgamma(1.0 + A / 2.0 - z);
            cplx term = 4.0 * parity(k + 1) * r;
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) {
                if (++small >= 2) break;
            } else {
                small = 0;
            }
        }
    }
    return -2.0 / (4.0 * pi * pi) * a * a * sum;
}

}  // namespace

// ---- PSL2(Z) -----------------------------------------------------------------

double xi_real(double u, cplx nu, XiMethod method, const QuadratureSpec& spec) {
    if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("xi_real: u must be positive");
    require_imaginary(nu, "xi_real");
    if (method == XiMethod::closed) return xi_closed(u, nu.imag());
    spec.validate();
    return xi_integral(u, nu, spec);
}

double xi_real_leading(double u, cplx nu) {
    if (!(u > 0.0)) throw std::invalid_argument("xi_real_leading: u must be positive");
    require_imaginary(nu, "xi_real_leading");
    cplx a = 0.5 + nu;
    cplx v = std::exp(-a * std::log(u) + 2.0 * loggamma(a) - loggamma(1.0 + 2.0 * nu));
    return 2.0 * ((1.0 - 1.0 / std::sin(pi * nu)) * v).real();
}

double theta_real_uncached(cplx nu, const Weight& g, const QuadratureSpec& spec) {
    require_imaginary(nu, "theta_real");
    spec.validate();
    const double t = std::abs(nu.imag());
    const double R = spec.truncation_radius;
    auto gc_at = [&](double x) { return transform_value(g, cplx(std::log1p(std::exp(-x))), spec).real(); };
    auto f = [&](double x) -> cplx {
        double gc = gc_at(x);
        if (gc == 0.0) return 0.0;
        return gc / std::sqrt(1.0 + std::exp(-x)) * xi_closed(std::exp(x), t);
    };
    // Towards u = 0, Xi is only O(log 1/u); the range starts where g_c has
    // dropped below 1e-30 of g_c(0).
    const double g0 = std::abs(transform_value(g, cplx(0.0), spec).real());
    double lo = -R;
    while (lo < 0.0 && std::abs(gc_at(lo + 1.0)) < 1e-30 * g0) lo += 1.0;
    // unit panels up to t = 3, then about one oscillation of u^{-it} each
    const double width = t <= 3.0 ? 1.0 : 4.0 / (t + 1.0);
    const long n_panels = std::lround(std::ceil((R - lo) / width - 1e-9));
    std::vector<double> knots;
    for (long i = 0; i < n_panels; ++i) knots.push_back(lo + double(i) * width);
    knots.push_back(R);
    // The integrand oscillates like u^{-it} with O(1) amplitude while the
    // integral decays in t; the absolute target is tied to int |f| (one
    // Kronrod rule per panel), which is the rounding floor. Each panel gets
    // its share by length.
    const Rule15& K = kronrod15();
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double c = 0.5 * (knots[i] + knots[i + 1]), h = 0.5 * (knots[i + 1] - knots[i]);
        for (int j = 0; j < 15; ++j) l1 += h * K.wk[j] * std::abs(f(c + h * K.x[j]));
    }
    const double units = std::ceil(R - lo - 1e-9);
    auto sweep = [&](double per_unit) {
        double I = 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            QuadratureSpec qs = spec;
            qs.abs_tol = std::max(per_unit * (knots[i + 1] - knots[i]), std::numeric_limits<double>::min());
            I += gauss_kronrod(f, {knots[i], knots[i + 1]}, qs).value.real();
        }
        return I;
    };
    const double strict = 4e-16 * l1 / units;
    double I1 = 0.0;
    try {
        I1 = sweep(strict);
    } catch (const ConvergenceError& e) {
        // Past t ~ 35 the closed Xi itself is only good to ~1e-9 (checked
        // against 80 digits), so the floor above is out of reach. Theta is
        // then far below spec.abs_tol, and that is the target that counts.
        const double loose = spec.abs_tol * 4.0 * std::cosh(pi * t) / units;
        std::ostringstream os;
        os.precision(17);
        os << "theta_real at t = " << t << ": " << e.what();
        if (!(loose > strict)) throw ConvergenceError(os.str());
        try {
            I1 = sweep(loose);
        } catch (const ConvergenceError&) {
            throw ConvergenceError(os.str());
        }
    }
    return I1 / (4.0 * std::cosh(pi * t));
}

double theta_real(cplx nu, const Weight& g, const QuadratureSpec& spec) {
    require_imaginary(nu, "theta_real");
    if (!cacheable(g)) return theta_real_uncached(nu, g, spec);
    auto key = real_key(nu, g, spec);
    if (auto v = cache().find(key)) {
        count(true);
        return *v;
    }
    count(false);
    double v = theta_real_uncached(nu, g, spec);
    cache().insert(key, v);
    return v;
}

std::vector<double> theta_real_batch(const std::vector<cplx>& nus, const Weight& g, const QuadratureSpec& spec,
                                     Exec exec) {
    std::vector<double> out(nus.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < nus.size(); ++i) {
        require_imaginary(nus[i], "theta_real");
        std::optional<double> v;
        if (cacheable(g)) v = cache().find(real_key(nus[i], g, spec));
        if (v) {
            out[i] = *v;
            count(true);
        } else {
            missing.push_back(i);
        }
    }
    for_each_index(long(missing.size()), exec,
                   [&](long k) { out[missing[k]] = theta_real_uncached(nus[missing[k]], g, spec); });
    // single writer, input order
    for (auto i : missing) {
        count(false);
        if (cacheable(g)) cache().insert(real_key(nus[i], g, spec), out[i]);
    }
    return out;
}

ThetaCacheStats theta_cache_stats() {
    std::shared_lock lock(cache().mu);
    std::lock_guard s(stats_mu);
    return {cache().values.size(), cache().hits, cache().misses};
}

void theta_cache_clear() {
    std::unique_lock lock(cache().mu);
    std::lock_guard s(stats_mu);
    cache().values.clear();
    cache().hits = cache().misses = 0;
}

CuspidalResult cuspidal_term(const Catalog& catalog, const Weight& g, const QuadratureSpec& spec, Exec exec) {
    if (catalog.kind != CatalogKind::real) throw std::invalid_argument("cuspidal_term: expected a PSL2(Z) catalog");
    std::vector<cplx> nus;
    for (const auto& r : catalog.real) {
        if (!r.central_H) throw std::invalid_argument("cuspidal_term: record '" + r.label + "' has no central_H");
        auto rep = validate_hecke(r, 1e-6);
        if (!rep.all_pass())
            throw std::invalid_argument("cuspidal_term: record '" + r.label + "' fails Hecke validation at 1e-6");
        nus.emplace_back(0.0, r.t);
    }
    auto thetas = theta_real_batch(nus, g, spec, exec);
    CuspidalResult out;
    for (std::size_t i = 0; i < catalog.real.size(); ++i) {
        const auto& r = catalog.real[i];
        double H = *r.central_H;
        FormContribution fc;
        fc.label = r.label;
        fc.t = r.t;
        fc.theta = thetas[i];
        fc.contribution = r.alpha * H * H * H * thetas[i];
        fc.normalization_tag = r.normalization_tag;
        out.total += fc.contribution;
        out.per_form.push_back(std::move(fc));
    }
    return out;
}

EisensteinResult eisenstein_term(const Weight& g, const QuadratureSpec& spec, double T, bool check_tail, Exec exec) {
    spec.validate();
    if (T < 0.0) throw std::invalid_argument("eisenstein_term: T must be >= 0");
    auto batch = [&](const std::vector<double>& ts) {
        std::vector<cplx> nus;
        for (double t : ts) nus.emplace_back(0.0, t);
        auto th = theta_real_batch(nus, g, spec, exec);
        std::vector<double> out(ts.size());
        for_each_index(long(ts.size()), exec, [&](long i) { out[i] = real_eis_density(ts[i], th[i]); });
        return out;
    };
    auto [sum, T_used] = integrate_to_decay(batch, T, spec.rel_tol);
    EisensteinResult r;
    r.value = 2.0 * sum.value;
    r.T = T_used;
    r.panels = sum.panels;
    if (check_tail) {
        PanelSum tail = integrate_panels(gram_knots(T_used, 2.0 * T_used), batch, spec.rel_tol,
                                         1e-17 * std::abs(sum.value));
        r.tail_2T = 2.0 * tail.value;
        r.tail_checked = true;
    }
    return r;
}

double eisenstein_term_full_line(const Weight& g, const QuadratureSpec& spec, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("eisenstein_term_full_line: T must be positive");
    // Theta(it) depends on |t| only by definition, so the cache is shared; the
    // zeta factors are evaluated at the negative t as given.
    auto batch = [&](const std::vector<double>& ts) {
        std::vector<double> out(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i)
            out[i] = real_eis_density(ts[i], theta_real(cplx(0.0, ts[i]), g, spec));
        return out;
    };
    auto knots = gram_knots(0.0, T);
    std::vector<double> full;
    for (auto it = knots.rbegin(); it != knots.rend(); ++it) full.push_back(-*it);
    full.insert(full.end(), knots.begin() + 1, knots.end());
    return integrate_panels(full, batch, spec.rel_tol, 0.0).value;
}

double fourth_moment_direct(const Weight& g, const QuadratureSpec& spec) {
    return mean_value_direct(LSelector{LSelector::Tag::riemann, 2}, g, spec);
}

MomentReport moment_report(const Catalog& catalog, const Weight& g, const QuadratureSpec& spec, Exec exec) {
    MomentReport r;
    r.weight_id = g.id;
    r.direct = fourth_moment_direct(g, spec);
    auto cusp = cuspidal_term(catalog, g, spec, exec);
    r.cuspidal = cusp.total;
    r.per_form = std::move(cusp.per_form);
    auto eis = eisenstein_term(g, spec, 0.0, true, exec);
    r.eisenstein = eis.value;
    r.residual = r.direct - r.cuspidal - r.eisenstein;
    r.truncation_metadata = json{{"direct_line_cut", spec.truncation_radius},
                                 {"theta_log_u_cut", spec.truncation_radius},
                                 {"eisenstein_T", eis.T},
                                 {"eisenstein_panels", eis.panels},
                                 {"eisenstein_tail_T_to_2T", eis.tail_2T},
                                 {"forms", catalog.real.size()},
                                 {"quarantined", catalog.quarantined.size()}};
    return r;
}

json MomentReport::to_json() const {
    json pf = json::array();
    for (const auto& f : per_form)
        pf.push_back({{"label", f.label},
                      {"t", f.t},
                      {"theta", f.theta},
                      {"contribution", f.contribution},
                      {"normalization_tag", f.normalization_tag}});
    return json{{"weight_id", weight_id}, {"direct", direct},     {"cuspidal", cuspidal},
                {"eisenstein", eisenstein}, {"residual", residual}, {"per_form", pf},
                {"truncation_metadata", truncation_metadata}};
}

std::string MomentReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "part,label,value\n";
    os << "direct,," << direct << "\n";
    os << "cuspidal,," << cuspidal << "\n";
    os << "eisenstein,," << eisenstein << "\n";
    os << "residual,," << residual << "\n";
    for (const auto& f : per_form) os << "form," << f.label << "," << f.contribution << "\n";
    return os.str();
}

// ---- PSL2(Z[i]) ----------------------------------------------------------------

cplx xi_complex_log_phi(int m, int p, cplx nu, cplx s) {
    double am = std::abs(m), al = std::abs(p + m), be = std::abs(p - m);
    cplx z = s / 4.0;
    cplx l = -4.0 * std::log(2.0);
    l += lgratio(z, am / 2.0, 0.5 + (al - nu) / 2.0) + lgratio(z, am / 2.0, 0.5 + (be + nu) / 2.0);
    l += lgratio(-z, 0.5 + (al + nu) / 2.0, 1.0 + am / 2.0) + lgratio(-z, 0.5 + (be - nu) / 2.0, 1.0 + am / 2.0);
    return l;
}

cplx xi_complex_mode(int m, int p, cplx nu, double a, const QuadratureSpec& spec, ModeMethod method) {
    require_imaginary(nu, "xi_complex_mode");
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("xi_complex_mode: a must be positive");
    // Strip of analyticity: -2|m| < Re s < 2 + 2 min(|p+m|, |p-m|). The line
    // sits half a unit from the pole that dominates a^{-s}; the contour then
    // bends away along rays on which a^{-s} decays.
    if (method == ModeMethod::residues) {
        if (!(a > 1.0) || nu == 0.0) throw std::domain_error("xi_complex_mode: residue series needs a > 1, nu != 0");
        return mode_residues(m, p, nu, a);
    }
    if (method == ModeMethod::automatic && a >= 2.0 && std::abs(nu.imag()) >= 0.05) return mode_residues(m, p, nu, a);
    const double la = std::log(a);
    const int am = std::abs(m), mn = std::min(std::abs(p + m), std::abs(p - m));
    double c = la < 0.0 ? 0.5 - 2.0 * am : (la > 0.0 ? 1.5 + 2.0 * mn : 1.0);
    auto Phi = [&](cplx s) { return std::exp(xi_complex_log_phi(m, p, nu, s) - s * la); };
    QuadratureSpec qs = spec;
    qs.rel_tol = std::min(spec.rel_tol, 1e-12);
    qs.abs_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(Phi(cplx(c, 0.0)));
    qs.max_subdivisions = std::max(spec.max_subdivisions, 4000);
    const double H = 2.0 * std::abs(nu.imag()) + 2.0;
    cplx tot = gauss_kronrod([&](double y) { return Phi(cplx(c, y)) * I; }, {-H, H}, qs).value;
    const double ang = la == 0.0 ? pi / 2.0 : (la < 0.0 ? 3.0 * pi / 4.0 : pi / 4.0);
    for (int sg : {1, -1}) {
        cplx d = std::polar(1.0, sg * ang), s0(c, sg * H);
        cplx r = double_exponential([&](double x) { return Phi(s0 + x * d) * d; }, {0.0, INFINITY}, qs).value;
        tot += sg > 0 ? r : -r;
    }
    return 2.0 / (4.0 * pi * pi) * a * a * tot / (2.0 * pi * I);
}

cplx xi_complex(cplx u, int p, cplx nu, const QuadratureSpec& spec, int m_max) {
    require_imaginary(nu, "xi_complex");
    double r = std::abs(u);
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("xi_complex: u must be nonzero");
    if (m_max < 1) throw std::invalid_argument("xi_complex: m_max must be positive");
    const double th = std::arg(u), a = std::sqrt(r);
    std::vector<cplx> partial;
    cplx S = parity(std::abs(p)) * xi_complex_mode(0, p, nu, a, spec);
    partial.push_back(S);
    int small = 0;
    for (int m = 1; m <= m_max; ++m) {
        double c = parity(std::max(std::abs(p), m));
        cplx term = c * (std::polar(1.0, -m * th) * xi_complex_mode(m, p, nu, a, spec) +
                         std::polar(1.0, m * th) * xi_complex_mode(-m, p, nu, a, spec));
        S += term;
        partial.push_back(S);
        small = std::abs(term) <= 1e-16 * std::abs(S) ? small + 1 : 0;
        if (small >= 3) return 32.0 * pi * pi * pi / r * S;
    }
    // slowly convergent near |u| = 1
    cplx acc = wynn_epsilon(partial);
    return 32.0 * pi * pi * pi / r * acc;
}

std::string ComplexThetaGrid::key() const {
    std::ostringstream os;
    os.precision(17);
    os << h << "," << x_hi << "," << n_angle << "," << m_max << "," << tau_max << "," << tau_panel;
    return os.str();
}

cplx theta_complex_integral(int p, cplx nu, const Weight& g, const QuadratureSpec& spec, int m_cut, bool swapped,
                            const ComplexThetaGrid& grid) {
    require_imaginary(nu, "theta_complex");
    validate_grid(grid);
    if (m_cut < 0) throw std::invalid_argument("theta_complex_integral: m_cut must be >= 0");
    if (!swapped) return theta_int_direct(p, nu, g, spec, grid, m_cut);
    return theta_int_swapped(p, nu, *transform_for(g, spec, grid), m_cut);
}

double theta_complex(int p, cplx nu, const Weight& g, const QuadratureSpec& spec, const ComplexThetaGrid& grid) {
    require_imaginary(nu, "theta_complex");
    validate_grid(grid);
    CacheKey key{1, p, nu.imag(), g.id, spec.abs_tol, spec.rel_tol, 0.0, grid.key()};
    if (cacheable(g))
        if (auto v = cache().find(key)) {
            count(true);
            return *v;
        }
    auto T = transform_for(g, spec, grid);
    double v = complex_prefactor(nu.imag()) * theta_int_swapped(p, nu, *T, grid.m_max).real();
    if (cacheable(g)) {
        count(false);
        cache().insert(key, v);
    }
    return v;
}

namespace {

// Theta(4p, it) on [-L, L] through Chebyshev-Lobatto nodes, doubled until the
// new nodes are predicted to 1e-7 of max |Theta|. L is where |Theta| has
// dropped below 1e-14 of its peak; beyond it the interpolant returns 0.
struct ThetaInterp {
    double L = 0.0;
    std::vector<double> x, f;  // nodes in [-1, 1] and values

    double operator()(double t) const {
        if (std::abs(t) >= L) return 0.0;
        return eval(t / L, x, f);
    }

    static double eval(double y, const std::vector<double>& x, const std::vector<double>& f) {
        const std::size_t n = x.size() - 1;
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            double d = y - x[j];
            if (d == 0.0) return f[j];
            double w = (j % 2 ? -1.0 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0) / d;
            num += w * f[j];
            den += w;
        }
        return num / den;
    }
};

ThetaInterp theta_interp(int p, const Weight& g, const QuadratureSpec& spec, const ComplexThetaGrid& grid,
                         Exec exec) {
    auto th = [&](double t) { return theta_complex(4 * p, cplx(0.0, t), g, spec, grid); };
    double peak = std::abs(th(0.0)), L = 0.0;
    for (;;) {
        L += 2.0;
        double a = std::abs(th(L)), b = std::abs(th(-L));
        peak = std::max({peak, a, b});
        if (std::max(a, b) < 1e-14 * peak) break;
        if (L > 200.0) throw ConvergenceError("gaussian Eisenstein: Theta did not decay by |t| = 200");
    }
    auto values = [&](const std::vector<double>& ys) {
        std::vector<double> v(ys.size());
        for_each_index(long(ys.size()), exec, [&](long i) { v[i] = th(L * ys[i]); });
        return v;
    };
    ThetaInterp r;
    r.L = L;
    std::size_t n = 32;
    for (std::size_t j = 0; j <= n; ++j) r.x.push_back(std::cos(pi * double(j) / double(n)));
    r.f = values(r.x);
    for (; n <= 1024; n *= 2) {
        std::vector<double> ys;
        for (std::size_t j = 1; j < 2 * n; j += 2) ys.push_back(std::cos(pi * double(j) / double(2 * n)));
        std::vector<double> fy = values(ys);
        double worst = 0.0, scale = peak;
        for (std::size_t i = 0; i < ys.size(); ++i)
            worst = std::max(worst, std::abs(ThetaInterp::eval(ys[i], r.x, r.f) - fy[i]));
        std::vector<double> x2(2 * n + 1), f2(2 * n + 1);
        for (std::size_t j = 0; j <= n; ++j) x2[2 * j] = r.x[j], f2[2 * j] = r.f[j];
        for (std::size_t i = 0; i < ys.size(); ++i) x2[2 * i + 1] = ys[i], f2[2 * i + 1] = fy[i];
        r.x = std::move(x2);
        r.f = std::move(f2);
        // the returned fit has the checked nodes too; convergence is
        // super-exponential here, so 1e-7 on n nodes is far below that on 2n
        if (worst <= 1e-7 * scale) return r;
    }
    throw ConvergenceError("gaussian Eisenstein: Chebyshev fit of Theta did not converge");
}

}  // namespace

double gaussian_eisenstein_p(int p, const Weight& g, const QuadratureSpec& spec, double T,
                             const ComplexThetaGrid& grid, Exec exec) {
    spec.validate();
    // Theta is smooth in t and cheap only through its interpolant; the zeta
    // factor carries the oscillation. Theta(4p, it) is not even in t (it
    // equals Theta(-4p, -it)), so both signs are taken at each node.
    const ThetaInterp th = theta_interp(p, g, spec, grid, exec);
    auto batch = [&](const std::vector<double>& ts) {
        std::vector<double> out(ts.size());
        for_each_index(long(ts.size()), exec, [&](long i) {
            double t = ts[i];
            out[i] = gauss_eis_density(p, t, th(t)) + gauss_eis_density(p, -t, th(-t));
        });
        return out;
    };
    // The swapped Theta is itself good to ~1e-8; the t-integral is not pushed past that.
    return integrate_to_decay(batch, T, std::max(spec.rel_tol, 1e-7), 1e-11).first.value;
}

json GaussianMomentTerms::to_json() const {
    json pf = json::array();
    for (const auto& f : per_form)
        pf.push_back({{"label", f.label}, {"p", f.p}, {"t", f.t}, {"theta", f.theta}, {"contribution", f.contribution}});
    json ep = json::array();
    for (const auto& e : eisenstein_per_p) ep.push_back({{"p", e.p}, {"value", e.value}});
    return json{{"cuspidal", cuspidal}, {"per_form", pf}, {"eisenstein", eisenstein},
                {"eisenstein_per_p", ep}, {"p_max", p_max}};
}

CuspidalResult gaussian_cuspidal_term(const Catalog& catalog, const Weight& g, const QuadratureSpec& spec,
                                      const ComplexThetaGrid& grid) {
    if (catalog.kind != CatalogKind::gaussian)
        throw std::invalid_argument("gaussian_cuspidal_term: expected a PSL2(Z[i]) catalog");
    CuspidalResult out;
    for (const auto& r : catalog.gaussian) {
        auto rep = validate_hecke(r, 1e-6);
        if (!rep.all_pass())
            throw std::invalid_argument("gaussian_cuspidal_term: record '" + r.label +
                                        "' fails Hecke validation at 1e-6");
        FormContribution fc;
        fc.label = r.label;
        fc.p = r.p;
        fc.t = r.t;
        if (r.eps == -1) {
            // H_V vanishes identically
            fc.contribution = 0.0;
        } else {
            if (!r.central_H)
                throw std::invalid_argument("gaussian_cuspidal_term: record '" + r.label + "' has no central_H");
            double H = *r.central_H;
            fc.theta = theta_complex(r.p, cplx(0.0, r.t), g, spec, grid);
            fc.contribution = r.rho1_sq * H * H * H * fc.theta;
        }
        out.total += fc.contribution;
        out.per_form.push_back(std::move(fc));
    }
    return out;
}

GaussianMomentTerms gaussian_moment_terms(const Catalog& catalog, const Weight& g, int p_max,
                                          const QuadratureSpec& spec, const ComplexThetaGrid& grid, Exec exec) {
    if (catalog.kind != CatalogKind::gaussian)
        throw std::invalid_argument("gaussian_moment_terms: expected a PSL2(Z[i]) catalog");
    if (p_max < 0) throw std::invalid_argument("gaussian_moment_terms: p_max must be >= 0");
    GaussianMomentTerms out;
    out.p_max = p_max;
    auto cusp = gaussian_cuspidal_term(catalog, g, spec, grid);
    out.cuspidal = cusp.total;
    out.per_form = std::move(cusp.per_form);
    for (int p = -p_max; p <= p_max; ++p) {
        double v = gaussian_eisenstein_p(p, g, spec, 0.0, grid, exec);
        out.eisenstein_per_p.push_back({p, v});
        out.eisenstein += v;
    }
    QuadratureSpec qs = spec;
    Weight gw = g;
    ComplexThetaGrid gr = grid;
    out.xi = [qs](cplx u, int p, cplx nu) { return xi_complex(u, p, nu, qs); };
    out.theta = [qs, gw, gr](int p, cplx nu) { return theta_complex(p, nu, gw, qs, gr); };
    return out;
}

}  // namespace zm
