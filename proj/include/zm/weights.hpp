#pragma once

#include <functional>
#include <string>

#include "zm/quadrature.hpp"

namespace zm {

// An even, entire test weight g, real on the real axis and of rapid decay.
struct Weight {
    std::function<cplx(cplx)> evaluator;
    double delta = 1.0;        // decay scale
    double strip_bound = 1.0;  // largest |Im t| callers may request
    // How far the real line may be shifted when integrating g(t) e^{ixt}.
    // Infinite for Gaussians; user weights default to strip_bound.
    double shift_budget = 1.0;
    // Optional exact cosine transform; used by consumers in place of quadrature.
    std::function<cplx(cplx)> closed_transform;
    std::string id;  // stable identity, e.g. "gaussian:2"

    cplx operator()(cplx t) const { return evaluator(t); }
};

Weight gaussian_weight(double delta);

// User-supplied weight without a closed-form transform.
Weight custom_weight(std::function<cplx(cplx)> g, double delta, double strip_bound, std::string id);

// "gaussian:<delta>"
Weight parse_weight(const std::string& text);

// g_c(x) = int_R g(t) cos(xt) dt by quadrature.
double cosine_transform(const Weight& g, double x, const QuadratureSpec& spec);
// Complex x: the same integral, with |Im x| kept inside the decay of g.
cplx cosine_transform(const Weight& g, cplx x, const QuadratureSpec& spec);

// Closed form when the weight has one, quadrature otherwise.
cplx transform_value(const Weight& g, cplx x, const QuadratureSpec& spec);

}  // namespace zm
