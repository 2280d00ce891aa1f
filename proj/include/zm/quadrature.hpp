#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "zm/common.hpp"

namespace zm {

enum class QuadMethod { AdaptiveSubdivision, DoubleExponential, ContourRotation, FilonOscillatory };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::DoubleExponential;
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 2000;
    double truncation_radius = 64.0;
    int working_precision_bits = 106;

    void validate() const;
    double tol_for(double magnitude) const { return std::max(abs_tol, rel_tol * magnitude); }
};

struct IntegralResult {
    cplx value{};
    double error_estimate = 0.0;
    long evaluations = 0;

    IntegralResult& operator+=(const IntegralResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        evaluations += o.evaluations;
        return *this;
    }
};

inline IntegralResult operator*(cplx c, IntegralResult r) {
    r.value *= c;
    r.error_estimate *= std::abs(c);
    return r;
}

using RealIntegrand = std::function<cplx(double)>;
using AnalyticIntegrand = std::function<cplx(cplx)>;

// [a, b]; b may be +inf, a may be -inf.
struct Domain {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
};

IntegralResult integrate(const RealIntegrand& f, Domain d, const QuadratureSpec& spec);

// Tanh-sinh on [a, b] with f(x, x - a, b - x); the distances are exact near
// the endpoints, for integrands singular there.
using EndpointIntegrand = std::function<cplx(double, double, double)>;
IntegralResult tanh_sinh(const EndpointIntegrand& f, double a, double b, const QuadratureSpec& spec);

IntegralResult gauss_kronrod(const RealIntegrand& f, Domain d, const QuadratureSpec& spec);
IntegralResult double_exponential(const RealIntegrand& f, Domain d, const QuadratureSpec& spec);

// One analytic piece of an oscillatory tail. dir = +1: the piece decays in the
// upper half plane, so the ray [a, inf) is swung onto a + i[0, inf).
// dir = -1: the lower half plane. dir = 0: integrate on the real ray.
struct Piece {
    AnalyticIntegrand h;
    int dir = 0;
};

// Sum over pieces of the integral of h over [a, inf), each rotated per dir.
IntegralResult integrate_rotated(std::span<const Piece> pieces, double a, const QuadratureSpec& spec);

// Tail integral over [a, inf) of a real-axis oscillatory f: panels of length
// half_period summed and accelerated with Wynn's epsilon algorithm.
IntegralResult integrate_oscillatory(const RealIntegrand& f, double a, double half_period,
                                     const QuadratureSpec& spec);

// f(x) = sum_j amp_j(x) exp(i omega_j x) with non-oscillatory amp_j.
struct Wave {
    AnalyticIntegrand amp;
    double omega = 0.0;
};

// Integral of f(x) x^(s-1) over (0, inf).
IntegralResult mellin_numeric(const AnalyticIntegrand& f, cplx s, const QuadratureSpec& spec);
// Oscillatory version: each wave's ray is rotated onto the imaginary axis.
IntegralResult mellin_numeric(std::span<const Wave> waves, cplx s, const QuadratureSpec& spec);

// The 15-point Kronrod rule on [-1, 1] with its embedded 7-point Gauss
// weights (zero at the Kronrod-only nodes); for callers that evaluate a whole
// panel's nodes in one batch.
struct Rule15 {
    double x[15];
    double wk[15];
    double wg[15];
};
const Rule15& kronrod15();

// Wynn epsilon extrapolation of a sequence of partial sums.
cplx wynn_epsilon(std::span<const cplx> partial_sums, double* error = nullptr);

}  // namespace zm
