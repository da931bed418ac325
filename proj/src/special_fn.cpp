#include "jsqlab/special_fn.hpp"

#include <cmath>
#include <limits>

namespace jsqlab {

namespace {

const double kEInv = std::exp(-1.0);
const double kBranchGuard = 1e-15;

// Series around the branch point x = -1/e in p = sqrt(2(1 + e x));
// p >= 0 gives W0, p <= 0 gives W_{-1}.
double branch_point_series(double p) {
    // Corless et al. coefficients.
    const double c3 = 11.0 / 72.0;
    const double c4 = -43.0 / 540.0;
    const double c5 = 769.0 / 17280.0;
    const double c6 = -221.0 / 8505.0;
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (c3 + p * (c4 + p * (c5 + p * c6)))));
}

// Halley refinement of w*exp(w) = x. Quadratic residual decay; the loop
// count is a safety net, convergence takes 2-4 steps from the guesses below.
double halley(double x, double w) {
    for (int it = 0; it < 60; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        if (f == 0.0) break;
        double wp1 = w + 1.0;
        double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        double step = f / denom;
        w -= step;
        if (std::abs(step) <= 2e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

// Newton on F(w) = w + log(w) - y, the log-form of w*exp(w) = exp(y).
double solve_w_plus_log_w(double y) {
    double w = y > 3.0 ? y - std::log(y) : std::max(y, 0.5);
    for (int it = 0; it < 60; ++it) {
        double f = w + std::log(w) - y;
        double step = f * w / (w + 1.0);
        w -= step;
        if (std::abs(step) <= 2e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

// Newton on v - log(v) = y with v > 1; W_{-1}(x) = -v for y = -log(-x).
double solve_v_minus_log_v(double y) {
    double v = y + std::log(std::max(y, 2.0));
    for (int it = 0; it < 60; ++it) {
        double f = v - std::log(v) - y;
        double step = f * v / (v - 1.0);
        v -= step;
        if (std::abs(step) <= 2e-16 * (1.0 + std::abs(v))) break;
    }
    return v;
}

}  // namespace

double lambert_w0(double x) {
    if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
    if (x < -kEInv) {
        if (x < -kEInv - kBranchGuard)
            throw std::domain_error("lambert_w0: argument below -1/e");
        return -1.0;
    }
    if (x == 0.0) return 0.0;
    double delta = x + kEInv;
    if (delta <= 0.0) return -1.0;
    if (delta < 1e-5) {
        // Too close to the branch point for Halley's denominator; the series
        // alone carries full double accuracy here.
        double p = std::sqrt(2.0 * std::exp(1.0) * delta);
        double w = branch_point_series(p);
        return delta < 1e-12 ? w : halley(x, w);
    }
    if (x > 1e10) return solve_w_plus_log_w(std::log(x));
    double w;
    if (x < -0.25) {
        w = branch_point_series(std::sqrt(2.0 * std::exp(1.0) * delta));
    } else if (x < 1.0) {
        w = x * (1.0 - x + 1.5 * x * x);  // series around 0
    } else if (x < 10.0) {
        w = 0.7 * std::log(1.0 + x);
    } else {
        double l1 = std::log(x);
        double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    return halley(x, w);
}

double lambert_wm1(double x) {
    if (std::isnan(x)) throw std::domain_error("lambert_wm1: NaN argument");
    if (x >= 0.0) throw std::domain_error("lambert_wm1: argument must be < 0");
    if (x < -kEInv) {
        if (x < -kEInv - kBranchGuard)
            throw std::domain_error("lambert_wm1: argument below -1/e");
        return -1.0;
    }
    double delta = x + kEInv;
    if (delta <= 0.0) return -1.0;
    if (delta < 1e-5) {
        double p = -std::sqrt(2.0 * std::exp(1.0) * delta);
        double w = branch_point_series(p);
        return delta < 1e-12 ? w : halley(x, w);
    }
    if (x > -0.05) {
        // |w| is large; solve the cancellation-free log form instead.
        return -solve_v_minus_log_v(-std::log(-x));
    }
    double l1 = std::log(-x);
    double l2 = std::log(-l1);
    double w = l1 - l2 + l2 / l1;
    if (x > -0.27) w = std::min(w, -1.0 - 1e-9);
    return halley(x, w);
}

double lambert_w0_deriv(double x) {
    if (x == 0.0) return 1.0;
    double w = lambert_w0(x);
    if (w <= -1.0 + 1e-14)
        throw std::domain_error("lambert_w0_deriv: derivative blows up at the branch point");
    return w / (x * (1.0 + w));
}

double lambert_w0_log(double y) {
    if (y < 30.0) return lambert_w0(std::exp(y));
    return solve_w_plus_log_w(y);
}

double smooth_indicator(const SmoothingSpec& spec, double x, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("smooth_indicator: order must be 0, 1, or 2");
    const double l = spec.lower, u = spec.upper;
    const double d = u - l;
    const double m = 0.5 * (l + u);
    if (order == 0) {
        if (x <= l) return 0.0;
        if (x >= u) return 1.0;
        if (x <= m) {
            double s = x - l;
            return s * s * (4.0 / (d * d) - 4.0 * s / (d * d * d));
        }
        double r = x - u;
        return 1.0 - r * r * (4.0 * r / (d * d * d) + 4.0 / (d * d));
    }
    if (order == 1) {
        if (x <= l || x >= u) return 0.0;
        if (x <= m) {
            double s = x - l;
            return 8.0 * s / (d * d) - 12.0 * s * s / (d * d * d);
        }
        double r = x - u;
        return -(12.0 * r * r / (d * d * d) + 8.0 * r / (d * d));
    }
    // order == 2, right-limit convention at the knots
    if (x < l || x >= u) return 0.0;
    if (x < m) {
        double s = x - l;
        return 8.0 / (d * d) - 24.0 * s / (d * d * d);
    }
    double r = x - u;
    return -(24.0 * r / (d * d * d) + 8.0 / (d * d));
}

}  // namespace jsqlab
