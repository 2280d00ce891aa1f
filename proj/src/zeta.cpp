#include "zm/zeta.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "zm/dd.hpp"
#include "zm/quadrature.hpp"
#include "zm/specfun.hpp"

namespace zm {

void LSelector::validate() const {
    if (power != 1 && power != 2) throw std::invalid_argument("LSelector: power must be 1 or 2");
}

namespace {

// B_{2k}/(2k)! for k = 1..kmax, via (-1)^(k+1) 2 zeta(2k) / (2 pi)^(2k).
constexpr int kmax = 120;

const std::array<double, kmax + 1>& bernoulli_ratios() {
    static const std::array<double, kmax + 1> table = [] {
        std::array<double, kmax + 1> b{};
        double tp = 2.0 * pi;
        for (int k = 1; k <= kmax; ++k) {
            double z2k;
            if (k == 1) z2k = pi * pi / 6.0;
            else if (k == 2) z2k = std::pow(pi, 4) / 90.0;
            else if (k == 3) z2k = std::pow(pi, 6) / 945.0;
            else if (k == 4) z2k = std::pow(pi, 8) / 9450.0;
            else {
                z2k = 0.0;
                for (int n = 300; n >= 1; --n) z2k += std::pow(double(n), -2.0 * k);
            }
            double sgn = (k % 2) ? 1.0 : -1.0;
            b[k] = sgn * 2.0 * z2k * std::pow(tp, -2.0 * k);
        }
        return b;
    }();
    return table;
}

}  // namespace

cplx hurwitz_zeta(cplx s, double a) {
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: a must be positive");
    if (s == 1.0) throw PoleError("hurwitz_zeta: pole at s = 1");
    const auto& b = bernoulli_ratios();
    double as = std::abs(s);
    int n = static_cast<int>(std::ceil(as / pi + 20.0));
    cdd sum(0.0);
    for (int k = n - 1; k >= 0; --k) sum += cdd(std::exp(-s * std::log(k + a)));
    double N = n + a;
    double lN = std::log(N);
    cplx nms = std::exp(-s * lN);
    sum += cdd(N * nms / (s - 1.0));
    sum += cdd(0.5 * nms);
    // Tail: sum_k B_{2k}/(2k)! (s)_{2k-1} N^(-s-2k+1)
    cplx poch = s;  // s (s+1) ... (s+2k-2)
    cplx pw = nms / N;
    double ref = std::max(sum.abs_approx(), 1e-300);
    bool done = false;
    for (int k = 1; k <= kmax; ++k) {
        cplx term = b[k] * poch * pw;
        sum += cdd(term);
        if (std::abs(term) < 1e-18 * ref) {
            done = true;
            break;
        }
        poch *= (s + double(2 * k - 1)) * (s + double(2 * k));
        pw /= N * N;
    }
    if (!done) throw ConvergenceError("hurwitz_zeta: Euler-Maclaurin tail did not converge");
    return sum.to_complex();
}

cplx riemann_zeta(cplx s) {
    if (s == 1.0) throw PoleError("riemann_zeta: pole at s = 1");
    return hurwitz_zeta(s, 1.0);
}

cplx dirichlet_l_chi4(cplx s) {
    if (s == 1.0) return pi / 4.0;
    return std::exp(-s * std::log(4.0)) * (hurwitz_zeta(s, 0.25) - hurwitz_zeta(s, 0.75));
}

cplx dedekind_zeta_gaussian(cplx s) {
    if (s == 1.0) throw PoleError("dedekind_zeta_gaussian: pole at s = 1");
    return riemann_zeta(s) * dirichlet_l_chi4(s);
}

cplx l_value(const LSelector& L, cplx s) {
    return L.tag == LSelector::Tag::riemann ? riemann_zeta(s) : dedekind_zeta_gaussian(s);
}

cplx upper_incomplete_gamma(cplx a, cplx z) {
    if (!(z.real() > 0.0)) throw std::domain_error("upper_incomplete_gamma: need Re z > 0");
    cplx lpre = a * std::log(z) - z;
    if (std::abs(z) > std::abs(a) + 8.0) {
        // Modified Lentz on the Legendre continued fraction
        // Gamma(a,z) = pre / (z + 1 - a - 1(1-a)/(z + 3 - a - 2(2-a)/(z + 5 - a - ...)))
        const double tiny = 1e-300;
        cplx bcoef = z + 1.0 - a;
        cplx f = bcoef;
        if (f == 0.0) f = tiny;
        cplx c = f, d = 0.0;
        for (int k = 1; k < 5000; ++k) {
            cplx an = -double(k) * (double(k) - a);
            bcoef += 2.0;
            d = bcoef + an * d;
            if (d == 0.0) d = tiny;
            c = bcoef + an / c;
            if (c == 0.0) c = tiny;
            d = 1.0 / d;
            cplx delta = c * d;
            f *= delta;
            if (std::abs(delta - 1.0) < 1e-16) return std::exp(lpre) / f;
        }
        throw ConvergenceError("upper_incomplete_gamma: continued fraction did not converge");
    }
    double dist_pole = a.real() > 0.5 ? 1.0 : std::abs(a - std::round(a.real()));
    if (dist_pole > 0.25) {
        // Gamma(a) - gamma(a, z); for |z| below |a| + 8 both pieces are of the
        // size of the result, so the difference does not cancel.
        cplx term = 1.0 / a, sum = term;
        double az = std::abs(z);
        for (int n = 1; n < 100000; ++n) {
            term *= z / (a + double(n));
            sum += term;
            if (n > az && std::abs(term) < 1e-17 * std::abs(sum)) return gamma(a) - std::exp(lpre) * sum;
        }
        throw ConvergenceError("upper_incomplete_gamma: series did not converge");
    }
    // Near a pole of Gamma(a), where Im a is small: pre * int_0^inf e^{-zu}
    // (1+u)^(a-1) du along the ray where zu > 0.
    double phi = std::arg(z);
    cplx rot = std::exp(-I * phi);
    double az = std::abs(z);
    QuadratureSpec qs;
    qs.abs_tol = 1e-300;
    qs.rel_tol = 1e-14;
    auto f = [&](double v) { return std::exp(-az * v + (a - 1.0) * std::log(1.0 + v * rot)); };
    IntegralResult r = double_exponential(f, {0.0, INFINITY}, qs);
    return std::exp(lpre) * rot * r.value;
}

namespace {

// Lattice points of Z[i] grouped by norm: for each norm m the list of (a, b).
struct NormShells {
    std::vector<std::int64_t> norms;
    std::vector<std::vector<std::pair<int, int>>> points;
};

NormShells shells_up_to(std::int64_t max_norm) {
    std::map<std::int64_t, std::vector<std::pair<int, int>>> m;
    int r = static_cast<int>(std::sqrt(double(max_norm))) + 1;
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b) {
            std::int64_t nn = std::int64_t(a) * a + std::int64_t(b) * b;
            if (nn == 0 || nn > max_norm) continue;
            m[nn].emplace_back(a, b);
        }
    NormShells s;
    for (auto& [k, v] : m) {
        s.norms.push_back(k);
        s.points.push_back(std::move(v));
    }
    return s;
}

}  // namespace

cplx hecke_zeta_gaussian(cplx s, int p, const HeckeZetaOptions& opt) {
    if (p == 0 && s == 1.0) throw PoleError("hecke_zeta_gaussian: pole at s = 1 for p = 0");
    int k = 4 * std::abs(p);
    cplx w = s + 0.5 * k;
    cplx c = opt.split;
    if (c == 0.0) {
        double t = s.imag();
        double phi = std::fabs(t) < 1e-12 ? 0.0 : std::copysign(pi / 2 - std::min(pi / 2, 10.0 / std::fabs(t)), t);
        phi = std::clamp(phi, -1.4, 1.4);
        c = std::exp(I * phi);
    }
    if (!(c.real() > 0.0)) throw std::invalid_argument("hecke_zeta_gaussian: split point needs Re > 0");
    cplx ci = 1.0 / c;
    double rc = std::min(c.real(), ci.real());
    auto max_norm = static_cast<std::int64_t>(std::ceil(opt.exponent_budget / (pi * rc))) + 2;
    NormShells sh = shells_up_to(max_norm);

    // Harmonic polynomial sum over the shell: P(n) = n^k or conj(n)^k.
    auto shell_sum = [&](const std::vector<std::pair<int, int>>& pts) {
        cplx acc = 0.0;
        for (auto [a, b] : pts) {
            cplx n(a, b);
            if (p < 0) n = std::conj(n);
            cplx v = 1.0;
            for (int j = 0; j < k; ++j) v *= n;
            acc += v;
        }
        return acc;
    };

    cdd lam(0.0);
    for (std::size_t i = 0; i < sh.norms.size(); ++i) {
        cplx ps = shell_sum(sh.points[i]);
        if (std::abs(ps) == 0.0) continue;
        double x = pi * double(sh.norms[i]);
        cplx lx = std::log(x);
        cplx t1 = std::exp(-w * lx) * upper_incomplete_gamma(w, x * c);
        cplx t2 = std::exp((w - double(k) - 1.0) * lx) * upper_incomplete_gamma(double(k) + 1.0 - w, x * ci);
        lam += cdd(ps * (t1 + t2));
    }
    if (k == 0) {
        cplx lc = std::log(c);
        lam += cdd(std::exp((w - 1.0) * lc) / (w - 1.0) - std::exp(w * lc) / w);
    }
    return std::exp(w * std::log(pi)) * lam.to_complex() * rgamma(w) / 4.0;
}

namespace {

constexpr std::int64_t sieve_limit = 1000000;

const std::vector<std::uint16_t>& divisor_sieve() {
    static std::vector<std::uint16_t> d;
    static std::once_flag once;
    std::call_once(once, [] {
        d.assign(sieve_limit + 1, 0);
        for (std::int64_t i = 1; i <= sieve_limit; ++i)
            for (std::int64_t j = i; j <= sieve_limit; j += i) ++d[j];
    });
    return d;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> lo, hi;
    for (std::int64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            lo.push_back(d);
            if (d != n / d) hi.push_back(n / d);
        }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

}  // namespace

std::int64_t divisor_count(std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("divisor_count: n must be positive");
    if (n <= sieve_limit) return divisor_sieve()[n];
    return static_cast<std::int64_t>(divisors(n).size());
}

cplx divisor_function(std::int64_t n, cplx lambda) {
    if (n <= 0) throw std::invalid_argument("divisor_function: n must be positive");
    if (lambda == 0.0) return double(divisor_count(n));
    auto ds = divisors(n);
    if (is_integer(lambda) && std::fabs(lambda.real()) <= 64.0) {
        int e = static_cast<int>(std::fabs(lambda.real()));
        // sigma_{-e}(n) = sigma_e(n) / n^e
        unsigned __int128 acc = 0;
        bool fits = true;
        const unsigned __int128 cap = ~static_cast<unsigned __int128>(0) >> 8;
        for (std::int64_t d : ds) {
            unsigned __int128 v = 1;
            for (int j = 0; j < e && fits; ++j) {
                if (v > cap / static_cast<unsigned __int128>(d)) fits = false;
                v *= static_cast<unsigned __int128>(d);
            }
            if (!fits) break;
            acc += v;
            if (acc > cap) fits = false;
        }
        if (fits) {
            long double val = static_cast<long double>(acc);
            if (lambda.real() < 0) val /= std::pow(static_cast<long double>(n), e);
            return static_cast<double>(val);
        }
    }
    cdd acc(0.0);
    for (std::int64_t d : ds) acc += cdd(std::exp(lambda * std::log(double(d))));
    return acc.to_complex();
}

}  // namespace zm
