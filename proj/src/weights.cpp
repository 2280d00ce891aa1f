#include "zm/weights.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace zm {

Weight gaussian_weight(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("gaussian_weight: delta must be positive");
    Weight w;
    w.delta = delta;
    w.strip_bound = 1.0;
    w.shift_budget = std::numeric_limits<double>::infinity();
    w.evaluator = [delta](cplx t) { return std::exp(-(t / delta) * (t / delta)); };
    w.closed_transform = [delta](cplx x) { return delta * std::sqrt(pi) * std::exp(-delta * delta * x * x / 4.0); };
    std::ostringstream os;
    os.precision(17);
    os << "gaussian:" << delta;
    w.id = os.str();
    return w;
}

Weight custom_weight(std::function<cplx(cplx)> g, double delta, double strip_bound, std::string id) {
    if (!g) throw std::invalid_argument("custom_weight: empty evaluator");
    if (!(delta > 0.0) || !(strip_bound > 0.0)) throw std::invalid_argument("custom_weight: delta and strip_bound must be positive");
    Weight w;
    w.evaluator = std::move(g);
    w.delta = delta;
    w.strip_bound = strip_bound;
    w.shift_budget = strip_bound;
    w.id = std::move(id);
    return w;
}

Weight parse_weight(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || text.substr(0, colon) != "gaussian")
        throw std::invalid_argument("weight must look like gaussian:<delta>, got '" + text + "'");
    std::string num = text.substr(colon + 1);
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(num, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("weight: cannot parse delta in '" + text + "'");
    }
    if (used != num.size()) throw std::invalid_argument("weight: trailing characters in '" + text + "'");
    return gaussian_weight(d);
}

cplx cosine_transform(const Weight& g, cplx x, const QuadratureSpec& spec) {
    spec.validate();
    // g even: the transform is int g(t) e^{ixt} dt. Shift t -> t + iy with y
    // chosen so that for a Gaussian the phase cancels exactly; the integrand is
    // then as small as the answer and relative accuracy survives large x.
    // |g(t + iy)| grows like e^{y^2/delta^2} while e^{ixz} shrinks like e^{-xy};
    // the factor e^{xy/2} is moved outside so neither piece leaves the double
    // range. y is capped where e^{y^2/delta^2} would overflow.
    if (x.real() < 0.0) x = -x;
    double d2 = g.delta * g.delta;
    double y = x.real() * d2 / 2.0;
    y = std::min({y, g.shift_budget, 25.5 * g.delta});
    double lift = 0.5 * x.real() * y;
    QuadratureSpec qs = spec;
    qs.abs_tol = 1e-300;
    auto f = [&](double t) {
        cplx z(t, y);
        cplx gv = g(z);
        if (gv == 0.0) return cplx(0.0);  // underflowed; the exponential may not be finite
        return gv * std::exp(I * x * z + lift);
    };
    IntegralResult r = double_exponential(f, {-INFINITY, INFINITY}, qs);
    return r.value * std::exp(-lift);
}

double cosine_transform(const Weight& g, double x, const QuadratureSpec& spec) {
    return cosine_transform(g, cplx(std::fabs(x), 0.0), spec).real();
}

cplx transform_value(const Weight& g, cplx x, const QuadratureSpec& spec) {
    if (g.closed_transform) return g.closed_transform(x);
    return cosine_transform(g, x, spec);
}

}  // namespace zm
