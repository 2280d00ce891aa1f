#include "zm/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "zm/dd.hpp"

namespace zm {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (!(truncation_radius > 0.0)) throw std::invalid_argument("truncation radius must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be >= 1");
    if (working_precision_bits < 53) throw std::invalid_argument("working precision below 53 bits");
}

namespace {

// Plain or compensated accumulation depending on working precision.
class Accum {
public:
    explicit Accum(bool compensated) : comp_(compensated) {}
    void add(cplx v) {
        if (comp_)
            acc_ += cdd(v);
        else
            plain_ += v;
    }
    cplx value() const { return comp_ ? acc_.to_complex() : plain_; }

private:
    bool comp_;
    cdd acc_{0.0};
    cplx plain_{};
};

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// ---- Gauss-Kronrod 7/15 ----------------------------------------------------

constexpr std::array<double, 8> xgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    cplx value;
    double err;
    bool frozen = false;  // too narrow to split further in double
    bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const std::function<cplx(double)>& f, double a, double b, long& evals) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    // Nodes that round onto an endpoint sit on a possible singularity: drop
    // them and charge the segment's own magnitude to its error.
    bool hit = false;
    auto ev = [&](double x) -> cplx {
        if (x <= a || x >= b) {
            hit = true;
            return 0.0;
        }
        return f(x);
    };
    cplx fc = ev(c);
    cplx rk = fc * wgk[7];
    cplx rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        cplx f1 = ev(c - dx), f2 = ev(c + dx);
        rk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
    }
    evals += 15;
    cplx k = rk * h, g = rg * h;
    if (!finite(k)) throw ConvergenceError("integrand returned a non-finite value");
    double err = std::abs(k - g);
    bool narrow = hit || !(a < c && c < b);
    if (hit) err += std::abs(k) + std::abs(g);
    return {a, b, k, err, narrow};
}

}  // namespace

const Rule15& kronrod15() {
    static const Rule15 rule = [] {
        Rule15 r{};
        for (int j = 0; j < 7; ++j) {
            r.x[j] = -xgk[j];
            r.x[14 - j] = xgk[j];
            r.wk[j] = r.wk[14 - j] = wgk[j];
            r.wg[j] = r.wg[14 - j] = (j % 2 == 1) ? wg[j / 2] : 0.0;
        }
        r.x[7] = 0.0;
        r.wk[7] = wgk[7];
        r.wg[7] = wg[3];
        return r;
    }();
    return rule;
}

namespace {

// ---- double exponential ------------------------------------------------------

enum class DEKind { TanhSinh, ExpSinh, SinhSinh };

struct Node {
    double x;
    double w;
    bool ok;  // false if the abscissa left the representable range
    double da = 0.0, db = 0.0;  // distances to the endpoints (tanh-sinh)
};

Node de_node(DEKind kind, double a, double b, double t) {
    constexpr double hp = pi / 2;
    double u = hp * std::sinh(t);
    switch (kind) {
        case DEKind::TanhSinh: {
            double e = std::exp(-2.0 * std::fabs(u));
            double len = b - a;
            double dist = len * e / (1.0 + e);
            double x = t < 0 ? a + dist : b - dist;
            double w = len * pi * std::cosh(t) * e / ((1.0 + e) * (1.0 + e));
            bool ok = dist > 0.0 && w > 0.0;
            double da = t < 0 ? dist : len - dist, db = t < 0 ? len - dist : dist;
            return {x, w, ok, da, db};
        }
        case DEKind::ExpSinh: {
            double eu = std::exp(u);
            double x = a + eu;
            double w = hp * std::cosh(t) * eu;
            return {x, w, std::isfinite(x) && std::isfinite(w) && eu > 0.0 && x != a};
        }
        case DEKind::SinhSinh: {
            double x = std::sinh(u);
            double w = hp * std::cosh(t) * std::cosh(u);
            return {x, w, std::isfinite(x) && std::isfinite(w)};
        }
    }
    return {0, 0, false};
}

using Integrand3 = std::function<cplx(double, double, double)>;

IntegralResult de_core(const Integrand3& f, DEKind kind, double a, double b, const QuadratureSpec& spec,
                       bool endpoint_aware = false) {
    constexpr double tmax = 6.5;
    constexpr double h0 = 0.5;
    constexpr int max_level = 9;
    const bool comp = spec.working_precision_bits > 53;
    long evals = 0;

    auto eval = [&](double t, bool& stop) -> cplx {
        Node n = de_node(kind, a, b, t);
        if (kind == DEKind::TanhSinh && !endpoint_aware && (n.x == a || n.x == b)) n.ok = false;
        if (!n.ok) {
            stop = true;
            return 0.0;
        }
        cplx v = f(n.x, n.da, n.db);
        ++evals;
        if (!finite(v)) {
            // Overflow at the far ends of the mapped range is harmless; the
            // weight has already sent the contribution to zero.
            bool extreme = std::fabs(n.x) > 1e14 || std::fabs(t) > 4.0;
            if (extreme) {
                stop = true;
                return 0.0;
            }
            throw ConvergenceError("integrand returned a non-finite value");
        }
        return v * n.w;
    };

    // Level 0: scan outward, record the active t range.
    std::vector<std::pair<double, cplx>> terms;
    {
        bool stop = false;
        terms.emplace_back(0.0, eval(0.0, stop));
    }
    // Magnitude of the last term before a side had to be cut short; what lies
    // beyond is not sampled and is charged to the error estimate.
    double cut_mass = 0.0;
    for (int side : {-1, 1}) {
        int small_run = 0;
        cplx last = terms.front().second;
        for (int k = 1; k * h0 <= tmax; ++k) {
            double t = side * k * h0;
            bool stop = false;
            cplx v = eval(t, stop);
            if (stop) {
                cut_mass += std::abs(last) * h0;
                break;
            }
            last = v;
            terms.emplace_back(t, v);
            small_run = std::abs(v) == 0.0 ? small_run + 1 : 0;
            if (small_run >= 3) break;
        }
    }
    double peak = 0.0;
    for (auto& [t, v] : terms) peak = std::max(peak, std::abs(v));
    double tl = 0.0, tr = 0.0;
    for (auto& [t, v] : terms)
        if (std::abs(v) > 1e-22 * peak) {
            tl = std::min(tl, t);
            tr = std::max(tr, t);
        }
    tl = std::max(tl - h0, -tmax);
    tr = std::min(tr + h0, tmax);

    Accum acc(comp);
    for (auto& [t, v] : terms) acc.add(v);
    cplx sum_nodes = acc.value();
    cplx prev = sum_nodes * h0;
    double h = h0;
    double err = std::numeric_limits<double>::infinity();
    cplx cur = prev;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        Accum add(comp);
        add.add(sum_nodes);
        for (double t = tl + h; t < tr; t += 2 * h) {
            bool stop = false;
            cplx v = eval(t, stop);
            if (!stop) add.add(v);
        }
        sum_nodes = add.value();
        cur = sum_nodes * h;
        err = std::abs(cur - prev);
        if (level >= 3 && err <= spec.tol_for(std::abs(cur))) break;
        prev = cur;
    }
    // The level difference overstates the error of the finer level, which is
    // what we want for an honest bound; add rounding floor.
    double floor = 64 * std::numeric_limits<double>::epsilon() * h * [&] {
        double s = 0.0;
        for (auto& [t, v] : terms) s += std::abs(v);
        return s;
    }();
    if (!(err <= spec.tol_for(std::abs(cur))) && err > 1e3 * spec.tol_for(std::abs(cur)))
        throw ConvergenceError("double exponential quadrature did not converge");
    return {cur, err + floor + cut_mass, evals};
}

Integrand3 lift(const RealIntegrand& f) {
    return [&f](double x, double, double) { return f(x); };
}

}  // namespace

IntegralResult tanh_sinh(const EndpointIntegrand& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("tanh_sinh: need finite a < b");
    return de_core(f, DEKind::TanhSinh, a, b, spec, true);
}

IntegralResult gauss_kronrod(const RealIntegrand& f, Domain d, const QuadratureSpec& spec) {
    spec.validate();
    if (d.a == d.b) return {0.0, 0.0, 1};
    double sign = 1.0;
    if (d.a > d.b) {
        std::swap(d.a, d.b);
        sign = -1.0;
    }
    std::function<cplx(double)> g;
    double lo, hi;
    bool ainf = std::isinf(d.a), binf = std::isinf(d.b);
    if (!ainf && !binf) {
        g = [&](double x) { return f(x); };
        lo = d.a;
        hi = d.b;
    } else if (!ainf) {
        double a = d.a;
        // x = a + (t/(1-t))^2 softens both x^(-1/2) at a and x^(-3/2) at infinity
        g = [&f, a](double t) {
            double s = 1.0 - t;
            if (s <= 0.0) return cplx(0.0);
            double r = t / s;
            return f(a + r * r) * (2.0 * t / (s * s * s));
        };
        lo = 0.0;
        hi = 1.0;
    } else if (!binf) {
        double b = d.b;
        g = [&f, b](double t) {
            double s = 1.0 - t;
            if (s <= 0.0) return cplx(0.0);
            double r = t / s;
            return f(b - r * r) * (2.0 * t / (s * s * s));
        };
        lo = 0.0;
        hi = 1.0;
    } else {
        g = [&f](double t) {
            double s = 1.0 - t * t;
            if (s <= 0.0) return cplx(0.0);
            return f(t / s) * (1.0 + t * t) / (s * s);
        };
        lo = -1.0;
        hi = 1.0;
    }
    long evals = 0;
    std::priority_queue<Segment> heap;
    Segment first = gk15(g, lo, hi, evals);
    heap.push(first);
    cplx total = first.value;
    double err = first.err;
    int subdivisions = 1;
    // Frozen segments cannot be refined; their error stays in the total and
    // the result is returned with that honest estimate.
    std::vector<Segment> frozen;
    double frozen_err = 0.0;
    while (err - frozen_err > spec.tol_for(std::abs(total)) && !heap.empty()) {
        if (subdivisions >= spec.max_subdivisions)
            throw ConvergenceError("adaptive quadrature exceeded max_subdivisions");
        Segment s = heap.top();
        heap.pop();
        if (s.frozen) {
            frozen.push_back(s);
            frozen_err += s.err;
            continue;
        }
        double m = 0.5 * (s.a + s.b);
        Segment l = gk15(g, s.a, m, evals), r = gk15(g, m, s.b, evals);
        total += l.value + r.value - s.value;
        err += l.err + r.err - s.err;
        heap.push(l);
        heap.push(r);
        ++subdivisions;
        if (err < 0) err = 0;
    }
    // Re-sum for a clean total and error.
    Accum acc(spec.working_precision_bits > 53);
    double e = 0.0;
    for (const Segment& s : frozen) {
        acc.add(s.value);
        e += s.err;
    }
    while (!heap.empty()) {
        acc.add(heap.top().value);
        e += heap.top().err;
        heap.pop();
    }
    return {sign * acc.value(), e, evals};
}

IntegralResult double_exponential(const RealIntegrand& f, Domain d, const QuadratureSpec& spec) {
    spec.validate();
    if (d.a == d.b) return {0.0, 0.0, 1};
    double sign = 1.0;
    if (d.a > d.b) {
        std::swap(d.a, d.b);
        sign = -1.0;
    }
    bool ainf = std::isinf(d.a), binf = std::isinf(d.b);
    IntegralResult r;
    if (!ainf && !binf) {
        r = de_core(lift(f), DEKind::TanhSinh, d.a, d.b, spec);
    } else if (!ainf) {
        r = de_core(lift(f), DEKind::ExpSinh, d.a, 0.0, spec);
    } else if (!binf) {
        double b = d.b;
        r = de_core([&f, b](double x, double, double) { return f(2 * b - x); }, DEKind::ExpSinh, b, 0.0, spec);
    } else {
        r = de_core(lift(f), DEKind::SinhSinh, 0.0, 0.0, spec);
    }
    r.value *= sign;
    return r;
}

IntegralResult integrate(const RealIntegrand& f, Domain d, const QuadratureSpec& spec) {
    switch (spec.method) {
        case QuadMethod::AdaptiveSubdivision:
            return gauss_kronrod(f, d, spec);
        default:
            return double_exponential(f, d, spec);
    }
}

IntegralResult integrate_rotated(std::span<const Piece> pieces, double a, const QuadratureSpec& spec) {
    IntegralResult total;
    for (const Piece& p : pieces) {
        if (p.dir == 0) {
            total += double_exponential([&](double x) { return p.h(cplx(x, 0.0)); }, {a, INFINITY}, spec);
        } else {
            double s = p.dir > 0 ? 1.0 : -1.0;
            auto g = [&](double y) { return s * I * p.h(cplx(a, s * y)); };
            total += double_exponential(g, {0.0, INFINITY}, spec);
        }
    }
    return total;
}

cplx wynn_epsilon(std::span<const cplx> s, double* error) {
    const std::size_t n = s.size();
    if (n == 0) return 0.0;
    if (n < 3) {
        if (error) *error = n == 2 ? std::abs(s[1] - s[0]) : INFINITY;
        return s.back();
    }
    // cols[k+1] is column k of the epsilon table; cols[0] is the zero column.
    std::vector<std::vector<cplx>> cols;
    cols.push_back(std::vector<cplx>(n + 1, 0.0));  // eps_{-1} = 0
    cols.push_back(std::vector<cplx>(s.begin(), s.end()));
    for (std::size_t k = 1; k < n; ++k) {
        const auto& a = cols[k - 1];
        const auto& b = cols[k];
        std::vector<cplx> c(b.size() - 1);
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            cplx diff = b[j + 1] - b[j];
            if (std::abs(diff) == 0.0) {
                c[j] = cplx(1e300, 0.0);
            } else {
                c[j] = a[j + 1] + 1.0 / diff;
            }
        }
        cols.push_back(std::move(c));
    }
    // Even columns (index 1, 3, 5 in cols) are estimates. Take the deepest
    // usable ones and compare the last two.
    cplx last = s.back(), before = s[n - 2];
    for (std::size_t k = 1; k < cols.size(); k += 2) {
        const auto& c = cols[k];
        if (c.size() < 2) break;
        if (!finite(c.back()) || std::abs(c.back()) > 1e250) break;
        before = c[c.size() - 2];
        last = c.back();
    }
    if (error) *error = std::abs(last - before);
    return last;
}

IntegralResult integrate_oscillatory(const RealIntegrand& f, double a, double half_period,
                                     const QuadratureSpec& spec) {
    if (!(half_period > 0.0)) throw std::invalid_argument("half period must be positive");
    std::vector<cplx> partial;
    cplx running = 0.0;
    long evals = 0;
    double err = INFINITY;
    cplx est = 0.0, prev_est = 0.0;
    QuadratureSpec ps = spec;
    ps.method = QuadMethod::AdaptiveSubdivision;
    for (int k = 0; k < 200; ++k) {
        IntegralResult r = gauss_kronrod(f, {a + k * half_period, a + (k + 1) * half_period}, ps);
        evals += r.evaluations;
        running += r.value;
        partial.push_back(running);
        if (partial.size() >= 6) {
            double e = 0.0;
            std::size_t m = std::min<std::size_t>(partial.size(), 40);
            est = wynn_epsilon(std::span<const cplx>(partial).last(m), &e);
            double change = std::abs(est - prev_est);
            err = std::max(e, change);
            if (err <= spec.tol_for(std::abs(est)) && k > 10) break;
            prev_est = est;
        }
    }
    if (!(err <= 1e3 * spec.tol_for(std::abs(est))))
        throw ConvergenceError("oscillatory tail did not converge");
    return {est, err, evals};
}

namespace {

void probe_mellin_divergence(const AnalyticIntegrand& f, cplx s) {
    auto mag = [&](double x) { return std::abs(f(cplx(x, 0.0))) * std::pow(x, s.real()); };
    double m1 = mag(1e-6), m2 = mag(1e-12);
    if (std::isfinite(m1) && std::isfinite(m2) && m2 > 10.0 * m1 && m2 > 1e-3)
        throw std::domain_error("Mellin integrand diverges at 0");
    if (!std::isfinite(m2) && std::isfinite(m1)) throw std::domain_error("Mellin integrand diverges at 0");
    double n1 = mag(1e6), n2 = mag(1e12);
    if (std::isfinite(n1) && std::isfinite(n2) && n2 > 10.0 * n1 && n2 > 1e-3)
        throw std::domain_error("Mellin integrand diverges at infinity");
}

}  // namespace

IntegralResult mellin_numeric(const AnalyticIntegrand& f, cplx s, const QuadratureSpec& spec) {
    probe_mellin_divergence(f, s);
    auto g = [&](double x) { return f(cplx(x, 0.0)) * std::exp((s - 1.0) * std::log(x)); };
    return integrate(g, {0.0, INFINITY}, spec);
}

IntegralResult mellin_numeric(std::span<const Wave> waves, cplx s, const QuadratureSpec& spec) {
    IntegralResult total;
    for (const Wave& w : waves) {
        if (w.omega == 0.0) {
            total += mellin_numeric(w.amp, s, spec);
            continue;
        }
        double sg = w.omega > 0 ? 1.0 : -1.0;
        double om = std::fabs(w.omega);
        // x = sg*i*y, x^(s-1) dx = (sg*i)^s y^(s-1) dy
        cplx phase = std::exp(sg * I * (pi / 2) * s);
        auto g = [&](double y) {
            return w.amp(cplx(0.0, sg * y)) * std::exp((s - 1.0) * std::log(y) - om * y);
        };
        total += phase * double_exponential(g, {0.0, INFINITY}, spec);
    }
    return total;
}

}  // namespace zm
