#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
inline constexpr cplx I{0.0, 1.0};

// A pole of a meromorphic function was hit exactly.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Result too large to represent; distinct from a pole.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Series, asymptotic switch or quadrature failed to reach tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

inline bool is_integer(cplx z) { return z.imag() == 0.0 && z.real() == std::floor(z.real()); }

// Serial reference or OpenMP fan-out; both reduce in index order, so results
// are bit-identical.
enum class Exec { serial, parallel };

// |a - b| / max(|a|, |b|), zero when both vanish.
inline double rel_diff(cplx a, cplx b) {
    double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

}  // namespace zm
