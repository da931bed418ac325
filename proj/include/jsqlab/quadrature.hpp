#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace jsqlab {

namespace detail {

template <typename F>
double simpson(const F& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_step(const F& f, double a, double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b] to absolute tolerance tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// Adaptive Simpson with forced subdivision at interior knots (kinks of the
// integrand); knots outside (a, b) are ignored.
template <typename F>
double integrate_with_knots(const F& f, double a, double b, double tol,
                            std::vector<double> knots) {
    if (a == b) return 0.0;
    knots.push_back(a);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    double total = 0.0;
    double lo = a;
    int pieces = 0;
    for (double k : knots)
        if (k > a && k < b) ++pieces;
    double piece_tol = tol / static_cast<double>(pieces + 1);
    for (double k : knots) {
        if (k <= lo || k > b) continue;
        double hi = std::min(k, b);
        total += adaptive_simpson(f, lo, hi, piece_tol);
        lo = hi;
    }
    if (lo < b) total += adaptive_simpson(f, lo, b, piece_tol);
    return total;
}

}  // namespace jsqlab
