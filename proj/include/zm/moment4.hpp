#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zm/report.hpp"
#include "zm/spectral_data.hpp"
#include "zm/weights.hpp"

namespace zm {

// ---- PSL2(Z) --------------------------------------------------------------

enum class XiMethod { closed, integral };

// Xi(u; nu) for u > 0, nu = it. closed: the 2F1 form, with the removable
// singularity at t = 0 handled by extrapolation in t^2. integral: the
// multiplicative convolution of j_0 and j_nu, as an independent check.
double xi_real(double u, cplx nu, XiMethod method = XiMethod::closed, const QuadratureSpec& spec = {});

// The closed form with 2F1 replaced by 1 (its u -> inf limit).
double xi_real_leading(double u, cplx nu);

// Theta(nu; g) = (1/(4 cos pi nu)) int_0^inf (u/(u+1))^(1/2) g_c(log(1 + 1/u)) Xi(u; nu) du/u,
// integrated in x = log u over [-R, R] with R = spec.truncation_radius. Cached.
double theta_real(cplx nu, const Weight& g, const QuadratureSpec& spec);
double theta_real_uncached(cplx nu, const Weight& g, const QuadratureSpec& spec);

// Fills the cache for every nu: misses are computed (in parallel under
// Exec::parallel) and inserted in input order.
std::vector<double> theta_real_batch(const std::vector<cplx>& nus, const Weight& g, const QuadratureSpec& spec,
                                     Exec exec = Exec::parallel);

// Shared Theta cache, keyed on (kind, p, nu, weight id, tolerances).
struct ThetaCacheStats {
    std::size_t entries = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
};
ThetaCacheStats theta_cache_stats();
void theta_cache_clear();

struct FormContribution {
    std::string label;
    int p = 0;  // Gaussian records only
    double t = 0.0;
    double theta = 0.0;
    double contribution = 0.0;
    std::string normalization_tag;
};

struct CuspidalResult {
    double total = 0.0;
    std::vector<FormContribution> per_form;
};

// sum_V alpha_V H_V(1/2)^3 Theta(nu_V; g), summed in catalog order. A record
// without central_H, or failing validate_hecke at 1e-6, aborts with its label
// (std::invalid_argument).
CuspidalResult cuspidal_term(const Catalog& catalog, const Weight& g, const QuadratureSpec& spec,
                             Exec exec = Exec::parallel);

struct EisensteinResult {
    double value = 0.0;
    double T = 0.0;           // integral taken over [-T, T]
    int panels = 0;
    double tail_2T = 0.0;     // int over T < |t| < 2T, when requested
    bool tail_checked = false;
};

// (1/2pi) int_R |zeta(1/2+it)|^6 / |zeta(1+2it)|^2 Theta(it; g) dt, as twice the
// integral over [0, T]. Panels have knots at most a Gram spacing apart. T = 0
// picks T where the panel contributions die out; check_tail adds [T, 2T].
EisensteinResult eisenstein_term(const Weight& g, const QuadratureSpec& spec, double T = 0.0,
                                 bool check_tail = true, Exec exec = Exec::parallel);

// Same integrand, but over the full line [-T, T] without using evenness.
double eisenstein_term_full_line(const Weight& g, const QuadratureSpec& spec, double T);

// int |zeta(1/2+it)|^4 g(t) dt
double fourth_moment_direct(const Weight& g, const QuadratureSpec& spec);

struct MomentReport {
    double direct = 0.0;
    double cuspidal = 0.0;
    double eisenstein = 0.0;
    double residual = 0.0;  // direct - cuspidal - eisenstein
    std::vector<FormContribution> per_form;
    json truncation_metadata = json::object();
    std::string weight_id;

    json to_json() const;
    std::string to_csv() const;  // part,label,value
};

MomentReport moment_report(const Catalog& catalog, const Weight& g, const QuadratureSpec& spec,
                           Exec exec = Exec::parallel);

// ---- PSL2(Z[i]) -----------------------------------------------------------

// log of M_{0,0,m}(s) M_{nu,p,m}(2 - s), the Mellin transforms (closed form)
// of the two radial kernels of the m-th Fourier mode.
cplx xi_complex_log_phi(int m, int p, cplx nu, cplx s);

// I_m(a) = int_0^inf K_{0,0}(2 pi x, m) K_{nu,p}(2 pi x / a, m) 2x dx from its
// Mellin-Barnes integral: the contour itself, or (a > 1, nu != 0) the residue
// series at the right poles. automatic takes residues for a >= 2, |nu| >= 0.05.
enum class ModeMethod { automatic, contour, residues };
cplx xi_complex_mode(int m, int p, cplx nu, double a, const QuadratureSpec& spec,
                     ModeMethod method = ModeMethod::automatic);

// Xi(u; p, nu) = (32 pi^3/|u|) sum_m (-1)^max(|p|,|m|) (u/|u|)^(-m) I_m(sqrt|u|),
// m-sum Wynn-accelerated. Real up to rounding; the imaginary part is returned
// so callers can see it. Logarithmic singularity at u = -1.
cplx xi_complex(cplx u, int p, cplx nu, const QuadratureSpec& spec, int m_max = 80);

// Discretisation of the swapped Mellin form of the complex Theta.
struct ComplexThetaGrid {
    // h must resolve Mellin frequencies up to tau_max: at h = 1/32 the
    // trapezoid in x aliases and Theta(16, .) is off by 8%.
    double h = 1.0 / 64;       // step in x = log |u|
    double x_hi = 75.0;        // the lower end scales with the weight's delta
    int n_angle = 2048;        // trapezoid nodes in arg u
    int m_max = 200;           // Fourier modes kept
    double tau_max = 320.0;    // Mellin line Re s = 1, |Im s| <= tau_max
    double tau_panel = 2.0;    // 8-point Gauss-Legendre panels

    std::string key() const;
};

// Theta(p, nu; g) = nu/(16 sin pi nu) int_C |u|/|u+1| g_c(2 log|1+1/u|) Xi(u; p, nu) d^x u,
// nu = it, t >= 0 (limit 1/(16 pi) at t = 0). Cached, together with the
// per-weight transform.
double theta_complex(int p, cplx nu, const Weight& g, const QuadratureSpec& spec, const ComplexThetaGrid& grid = {});

// The integral without the nu/(16 sin pi nu) prefactor, restricted to |m| <= m_cut.
// swapped: the cached Mellin form. Otherwise the u-integral is done directly
// with pointwise I_m (slow; a cross-check only).
cplx theta_complex_integral(int p, cplx nu, const Weight& g, const QuadratureSpec& spec, int m_cut, bool swapped,
                            const ComplexThetaGrid& grid = {});

struct GaussianEisensteinPart {
    int p = 0;
    double value = 0.0;
};

struct GaussianMomentTerms {
    double cuspidal = 0.0;
    std::vector<FormContribution> per_form;
    double eisenstein = 0.0;
    std::vector<GaussianEisensteinPart> eisenstein_per_p;  // p = -p_max .. p_max
    int p_max = 0;
    double T = 0.0;
    std::function<cplx(cplx, int, cplx)> xi;      // (u, p, nu)
    std::function<double(int, cplx)> theta;       // (p, nu)

    json to_json() const;
};

// (1/2pi) int_R |zeta_k((1+it)/2, p)|^6 / |zeta_k(1+it, 2p)|^2 Theta(4p, it; g) dt
double gaussian_eisenstein_p(int p, const Weight& g, const QuadratureSpec& spec, double T = 0.0,
                             const ComplexThetaGrid& grid = {}, Exec exec = Exec::parallel);

// sum_V |rho_V(1)|^2 H_V(1/2)^3 Theta(p_V, nu_V), catalog order; eps = -1
// records give exactly 0 without touching Theta.
CuspidalResult gaussian_cuspidal_term(const Catalog& catalog, const Weight& g, const QuadratureSpec& spec,
                                      const ComplexThetaGrid& grid = {});

// Cuspidal sum |rho_V(1)|^2 H_V(1/2)^3 Theta(p_V, nu_V) (eps = -1 records give
// exactly 0) and the Eisenstein sum over |p| <= p_max.
GaussianMomentTerms gaussian_moment_terms(const Catalog& catalog, const Weight& g, int p_max,
                                          const QuadratureSpec& spec, const ComplexThetaGrid& grid = {},
                                          Exec exec = Exec::parallel);

}  // namespace zm
