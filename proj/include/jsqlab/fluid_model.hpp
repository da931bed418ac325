#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "jsqlab/params.hpp"

namespace jsqlab {

constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// Unique solution (nu*, eta*) of the nonlinear system describing the curve of
// initial conditions whose trajectories reach the vertical axis at height
// kappa/sqrt(n).
struct GammaSolution {
    double nu_star = 0.0;
    double eta_star = 0.0;
    double kappa = 0.0;
    double x1 = 0.0;
};

enum class GammaSide { Below, On, Above };

// Requires kappa >= beta and x1 <= 0. Reduces to a scalar equation in nu,
// bracketed per the two monotonicity cases of the underlying function, then
// refined to ~1e-13; both residuals are verified to 1e-11 before returning.
GammaSolution gamma_solve(const ModelParams& params, double kappa, double x1);

// Compares x2 against nu*(x1) with an absolute band of 1e-10 for "On".
GammaSide classify_vs_gamma(const ModelParams& params, double kappa, const FluidPoint& x);

// First time the trajectory from x reaches the vertical axis {x1 = 0};
// +infinity when it never does.
double hitting_time(const ModelParams& params, const FluidPoint& x);

struct TauGrad {
    double t1 = 0.0;
    double t2 = 0.0;
};

// One-sided partials of the hitting time; requires a finite hitting time with
// x2*exp(-tau) - beta/sqrt(n) bounded away from zero.
TauGrad tau_grad(const ModelParams& params, const FluidPoint& x);

// Time for the free trajectory from x (x1 <= -kappa/sqrt(n)) to reach the set
// {x1 = -kappa/sqrt(n)}; extended to x2 = 0 by its limit value.
double tilde_tau(const ModelParams& params, double kappa, const FluidPoint& x);

TauGrad tilde_tau_grad(const ModelParams& params, double kappa, const FluidPoint& x);

// Piecewise closed-form trajectory: free flow until the axis, sliding down the
// axis while the regulator is active, then free flow again from the re-entry
// point. All evaluation is exact (no ODE stepping).
struct FluidTrajectory {
    FluidPoint start;
    double b = 0.0;                           // beta/sqrt(n)
    double hit_time = kInfiniteTime;          // tau(x)
    double v2_at_hit = 0.0;                   // x2 * exp(-tau)
    double boundary_exit_time = kInfiniteTime;  // reaches (0, beta/sqrt(n))
    double reentry_time = kInfiniteTime;      // start of the terminal free phase
    FluidPoint reentry_point;

    FluidPoint at(double t) const;
};

FluidTrajectory make_trajectory(const ModelParams& params, const FluidPoint& x);

// fluid_flow(x, t) = trajectory position at time t.
FluidPoint fluid_flow(const ModelParams& params, const FluidPoint& x, double t);

struct ValueIntegralOptions {
    double tol = 1e-10;
    double max_horizon = 200.0;
    // Known kink levels of h, used only to place quadrature split points.
    std::vector<double> x2_levels;
    std::vector<double> neg_x1_levels;
};

// Integral of h along the trajectory from x, truncated once h has vanished;
// h must vanish near the equilibrium (-beta/sqrt(n), 0). Throws
// ConvergenceFailure if h has not vanished by max_horizon.
double value_integral(const ModelParams& params, const std::function<double(const FluidPoint&)>& h,
                      const FluidPoint& x, const ValueIntegralOptions& opts = {});

}  // namespace jsqlab
