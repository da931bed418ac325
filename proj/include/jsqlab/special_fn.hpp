#pragma once

#include <stdexcept>

namespace jsqlab {

// Principal branch W0 on [-1/e, inf): returns w >= -1 with w*exp(w) = x.
// Arguments within a 1e-15 guard band below -1/e are treated as the branch
// point itself; anything lower throws std::domain_error.
double lambert_w0(double x);

// Lower branch W_{-1} on [-1/e, 0): returns w <= -1 with w*exp(w) = x.
double lambert_wm1(double x);

// W0'(x) = W0(x) / (x (1 + W0(x))), with the removable singularity W0'(0) = 1.
// Throws std::domain_error at the branch point where the derivative blows up.
double lambert_w0_deriv(double x);

// W0(exp(y)) for arbitrary real y, without forming exp(y). Needed by callers
// whose W arguments are products r*exp(c) with c large enough to overflow.
double lambert_w0_log(double y);

// C^1 smoothed step: 0 below `lower`, 1 above `upper`, quadratic-cubic ramp
// in between. |phi'| <= 4/(u-l) and |phi''| <= 12/(u-l)^2.
struct SmoothingSpec {
    double lower;
    double upper;
    SmoothingSpec(double l, double u) : lower(l), upper(u) {
        if (!(l < u)) throw std::invalid_argument("SmoothingSpec: lower < upper required");
    }
    double width() const { return upper - lower; }
};

// order 0: phi(x); order 1: phi'(x); order 2: the a.e. second derivative,
// defined at the three knots by the right-limit value.
double smooth_indicator(const SmoothingSpec& spec, double x, int order);

}  // namespace jsqlab
