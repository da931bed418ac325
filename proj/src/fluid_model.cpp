#include "jsqlab/fluid_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jsqlab/quadrature.hpp"
#include "jsqlab/special_fn.hpp"

namespace jsqlab {

namespace {

const double kEInv = std::exp(-1.0);

// Free (unregulated) flow started from x.
FluidPoint free_flow(double b, const FluidPoint& x, double t) {
    double emt = std::exp(-t);
    FluidPoint v;
    v.x1 = -b + (x.x1 + b) * emt + t * x.x2 * emt;
    v.x2 = x.x2 * emt;
    return v;
}

// Scalar reduction of the curve system, solved in log space to dodge
// overflow: g(nu) = log(b/nu) - A/nu - log(beta/kappa) + beta/kappa, with
// A = x1 + b. g is strictly decreasing on [max(kappa/sqrt(n), A), inf).
struct GammaScalar {
    double b, A, target;  // target = log(beta/kappa) - beta/kappa
    double operator()(double nu) const { return std::log(b / nu) - A / nu - target; }
};

double brent_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                  double fhi) {
    // classic Brent-Dekker
    double a = lo, b = hi, fa = flo, fb = fhi;
    if (fa * fb > 0.0) throw ConvergenceFailure("brent_root: endpoints do not bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol = 2.0 * 1e-16 * std::abs(b) + 1e-300;
        double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = m; e = m;
        } else {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                double q0 = fa / fc, r = fb / fc;
                p = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = m; e = m;
            }
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
    }
    throw ConvergenceFailure("brent_root: no convergence in 200 iterations");
}

}  // namespace

GammaSolution gamma_solve(const ModelParams& params, double kappa, double x1) {
    if (kappa < params.beta)
        throw std::invalid_argument("gamma_solve: kappa >= beta required");
    if (x1 > 0.0) throw std::domain_error("gamma_solve: x1 <= 0 required");
    const double b = params.b();
    const double k = kappa / params.sqrt_n();
    GammaSolution sol;
    sol.kappa = kappa;
    sol.x1 = x1;
    if (x1 == 0.0) {
        sol.nu_star = k;
        sol.eta_star = 0.0;
        return sol;
    }
    const double A = x1 + b;
    GammaScalar g{b, A, std::log(params.beta / kappa) - params.beta / kappa};
    double lo = std::max(k, A);
    double glo = g(lo);
    if (glo < 0.0) {
        // x1 == 0 is the only case with g(lo) = 0 in exact arithmetic;
        // tolerate rounding at the boundary.
        if (glo > -1e-12) {
            sol.nu_star = lo;
            sol.eta_star = std::max(0.0, -A / lo + params.beta / kappa);
            return sol;
        }
        throw ConvergenceFailure("gamma_solve: bracket lower end not valid");
    }
    double hi = 2.0 * std::max({lo, b, 1.0 / params.sqrt_n()});
    double ghi = g(hi);
    int guard = 0;
    while (ghi > 0.0) {
        hi *= 2.0;
        ghi = g(hi);
        if (++guard > 400) throw ConvergenceFailure("gamma_solve: failed to bracket");
    }
    double nu = brent_root([&](double v) { return g(v); }, lo, hi, glo, ghi);
    double eta = -A / nu + params.beta / kappa;
    sol.nu_star = nu;
    sol.eta_star = std::max(0.0, eta);

    double r1 = std::abs(-b + A * std::exp(-sol.eta_star) + sol.eta_star * nu * std::exp(-sol.eta_star));
    double r2 = std::abs(nu * std::exp(-sol.eta_star) - k);
    if (r1 > 1e-11 || r2 > 1e-11)
        throw ConvergenceFailure("gamma_solve: residuals exceed 1e-11 (r1=" + std::to_string(r1) +
                                 ", r2=" + std::to_string(r2) + ")");
    return sol;
}

GammaSide classify_vs_gamma(const ModelParams& params, double kappa, const FluidPoint& x) {
    require_in_omega(x);
    GammaSolution sol = gamma_solve(params, kappa, x.x1);
    const double band = 1e-10;
    if (x.x2 > sol.nu_star + band) return GammaSide::Above;
    if (x.x2 < sol.nu_star - band) return GammaSide::Below;
    return GammaSide::On;
}

double hitting_time(const ModelParams& params, const FluidPoint& x) {
    require_in_omega(x);
    const double b = params.b();
    if (x.x1 == 0.0) return 0.0;
    if (x.x2 == 0.0) return kInfiniteTime;  // v1 < 0 decays to -b, never reaches 0
    double a = (x.x1 + b) / x.x2;
    // z = -(b/x2) e^{-a}; compare against the branch point in log space first
    double log_abs_z = std::log(b / x.x2) - a;
    if (log_abs_z > 700.0) return kInfiniteTime;
    double z = -std::exp(log_abs_z);
    if (z < -kEInv - 1e-15) return kInfiniteTime;
    double tau = -a - lambert_w0(z);
    if (tau >= 0.0) return tau;
    if (tau >= -1e-12) return 0.0;
    return kInfiniteTime;
}

TauGrad tau_grad(const ModelParams& params, const FluidPoint& x) {
    double tau = hitting_time(params, x);
    if (!std::isfinite(tau)) throw std::domain_error("tau_grad: hitting time is infinite");
    double w = x.x2 * std::exp(-tau);
    double denom = w - params.b();
    if (denom <= 1e-14)
        throw std::domain_error("tau_grad: singular, x2*exp(-tau) - beta/sqrt(n) <= 1e-14");
    TauGrad g;
    g.t1 = -std::exp(-tau) / denom;
    g.t2 = g.t1 * tau;
    return g;
}

double tilde_tau(const ModelParams& params, double kappa, const FluidPoint& x) {
    if (kappa <= params.beta)
        throw std::invalid_argument("tilde_tau: kappa > beta required");
    const double b = params.b();
    const double k = kappa / params.sqrt_n();
    if (x.x1 > -k + 1e-12 * std::max(1.0, k))
        throw std::domain_error("tilde_tau: x1 <= -kappa/sqrt(n) required");
    if (x.x2 < 0.0) throw std::domain_error("tilde_tau: x2 >= 0 required");
    if (x.x1 >= -k) return 0.0;
    if (x.x2 == 0.0) return std::log((-params.sqrt_n() * x.x1 - params.beta) / (kappa - params.beta));
    double c = -(x.x1 + b) / x.x2;
    double y = std::log((k - b) / x.x2) + c;
    double t = c - lambert_w0_log(y);
    return std::max(0.0, t);
}

TauGrad tilde_tau_grad(const ModelParams& params, double kappa, const FluidPoint& x) {
    double t = tilde_tau(params, kappa, x);
    double emt = std::exp(-t);
    double denom = x.x2 * emt + (kappa - params.beta) / params.sqrt_n();
    TauGrad g;
    g.t1 = -emt / denom;
    g.t2 = g.t1 * t;  // same cross-identity as the axis hitting time
    return g;
}

FluidPoint FluidTrajectory::at(double t) const {
    if (t < 0.0) throw std::domain_error("FluidTrajectory: t >= 0 required");
    if (t < hit_time) {
        FluidPoint v = free_flow(b, start, t);
        v.x1 = std::min(v.x1, 0.0);
        v.x2 = std::max(v.x2, 0.0);
        return v;
    }
    if (t < reentry_time) return FluidPoint{0.0, v2_at_hit - b * (t - hit_time)};
    FluidPoint v = free_flow(b, reentry_point, t - reentry_time);
    v.x1 = std::min(v.x1, 0.0);
    v.x2 = std::max(v.x2, 0.0);
    return v;
}

FluidTrajectory make_trajectory(const ModelParams& params, const FluidPoint& x) {
    require_in_omega(x);
    FluidTrajectory traj;
    traj.start = x;
    traj.b = params.b();
    traj.hit_time = hitting_time(params, x);
    if (!std::isfinite(traj.hit_time)) return traj;
    traj.v2_at_hit = x.x2 * std::exp(-traj.hit_time);
    if (traj.v2_at_hit >= traj.b) {
        // regulator holds the state on the axis while v2 drains at rate b
        traj.boundary_exit_time = traj.hit_time + (traj.v2_at_hit - traj.b) / traj.b;
        traj.reentry_time = traj.boundary_exit_time;
        traj.reentry_point = FluidPoint{0.0, traj.b};
    } else {
        traj.reentry_time = traj.hit_time;
        traj.reentry_point = FluidPoint{0.0, traj.v2_at_hit};
    }
    return traj;
}

FluidPoint fluid_flow(const ModelParams& params, const FluidPoint& x, double t) {
    return make_trajectory(params, x).at(t);
}

namespace {

// Crossing time of the free-flow -v1 with a level L > b, if any.
double free_neg_v1_crossing(const ModelParams& params, const FluidPoint& x, double L) {
    if (-x.x1 <= L) return kInfiniteTime;
    const double b = params.b();
    if (x.x2 == 0.0) return std::log((-x.x1 - b) / (L - b));
    double c = -(x.x1 + b) / x.x2;
    double y = std::log((L - b) / x.x2) + c;
    return std::max(0.0, c - lambert_w0_log(y));
}

}  // namespace

double value_integral(const ModelParams& params, const std::function<double(const FluidPoint&)>& h,
                      const FluidPoint& x, const ValueIntegralOptions& opts) {
    require_in_omega(x);
    const double b = params.b();
    if (h(FluidPoint{-b, 0.0}) != 0.0)
        throw std::invalid_argument("value_integral: h must vanish at the equilibrium");

    FluidTrajectory traj = make_trajectory(params, x);
    std::vector<double> kinks;
    auto add = [&](double t) {
        if (t > 0.0 && std::isfinite(t) && t < opts.max_horizon) kinks.push_back(t);
    };
    add(traj.hit_time);
    add(traj.boundary_exit_time);
    // level-crossing times of v2 per phase
    for (double L : opts.x2_levels) {
        if (L <= 0.0) continue;
        if (x.x2 > L) {
            double t = std::log(x.x2 / L);
            if (t < traj.hit_time) add(t);
        }
        if (std::isfinite(traj.hit_time)) {
            if (traj.v2_at_hit >= traj.b && L < traj.v2_at_hit && L > traj.b)
                add(traj.hit_time + (traj.v2_at_hit - L) / traj.b);
            double w3 = traj.reentry_point.x2;
            if (std::isfinite(traj.reentry_time) && L < w3)
                add(traj.reentry_time + std::log(w3 / L));
        }
    }
    for (double L : opts.neg_x1_levels) {
        if (L <= b) continue;
        double t = free_neg_v1_crossing(params, x, L);
        if (t < traj.hit_time) add(t);
    }
    std::sort(kinks.begin(), kinks.end());

    auto integrand = [&](double t) { return h(traj.at(t)); };
    double total = 0.0;
    double lo = 0.0;
    double seg_tol = opts.tol / (kinks.size() + 16.0);
    for (double k : kinks) {
        if (k <= lo) continue;
        total += adaptive_simpson(integrand, lo, k, seg_tol);
        lo = k;
    }
    // march unit windows until h has been identically zero for several windows
    int zero_windows = 0;
    while (zero_windows < 3) {
        if (lo >= opts.max_horizon)
            throw ConvergenceFailure("value_integral: h has not vanished by the horizon");
        double hi = std::min(lo + 1.0, opts.max_horizon);
        bool all_zero = true;
        for (int i = 0; i <= 16; ++i) {
            double t = lo + (hi - lo) * i / 16.0;
            if (integrand(t) != 0.0) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            ++zero_windows;
        } else {
            zero_windows = 0;
            total += adaptive_simpson(integrand, lo, hi, seg_tol);
        }
        lo = hi;
    }
    return total;
}

}  // namespace jsqlab
