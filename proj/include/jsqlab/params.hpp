#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace jsqlab {

// System scale n, slack beta, derived arrival rate lambda = 1 - beta/sqrt(n).
struct ModelParams {
    int n = 1;
    double beta = 1.0;
    double lambda = 0.0;

    ModelParams() = default;
    ModelParams(int n_, double beta_) : n(n_), beta(beta_) {
        if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
        if (beta <= 0.0) throw std::invalid_argument("ModelParams: beta must be > 0");
        if (beta >= std::sqrt(static_cast<double>(n)))
            throw std::invalid_argument("ModelParams: beta must be < sqrt(n) so lambda > 0");
        lambda = 1.0 - beta / std::sqrt(static_cast<double>(n));
    }

    double sqrt_n() const { return std::sqrt(static_cast<double>(n)); }
    // beta/sqrt(n), the fluid-scale slack that shows up in every closed form.
    double b() const { return beta / sqrt_n(); }
};

// Point of Omega = (-inf,0] x [0,inf) at fluid scale.
struct FluidPoint {
    double x1 = 0.0;
    double x2 = 0.0;
};

// Point of Omega at diffusion scale, y = sqrt(n) * x.
struct DiffusionPoint {
    double y1 = 0.0;
    double y2 = 0.0;
};

inline void require_in_omega(const FluidPoint& x) {
    if (!(x.x1 <= 0.0) || !(x.x2 >= 0.0))
        throw std::domain_error("point outside Omega = (-inf,0] x [0,inf)");
}

// Function value with first and second partials at a point.
// f12 is only populated for jets whose consumers need it.
struct FieldJet {
    double f = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double f11 = 0.0;
    double f12 = 0.0;
    double f22 = 0.0;
    bool has_f12 = false;
};

enum class GridScale { Fluid, Diffusion };

struct GridSpec {
    double x1_lo = -1.0, x1_hi = 0.0;
    double x2_lo = 0.0, x2_hi = 1.0;
    int n1 = 2, n2 = 2;
    GridScale scale = GridScale::Fluid;

    void validate() const {
        if (n1 < 2 || n2 < 2) throw std::invalid_argument("GridSpec: points-per-axis must be >= 2");
        if (!(x1_lo <= x1_hi) || !(x2_lo <= x2_hi))
            throw std::invalid_argument("GridSpec: ranges must be ordered");
        if (x1_hi > 0.0 || x2_lo < 0.0)
            throw std::invalid_argument("GridSpec: ranges must lie in Omega");
    }
    double x1_at(int i) const { return x1_lo + (x1_hi - x1_lo) * i / (n1 - 1); }
    double x2_at(int j) const { return x2_lo + (x2_hi - x2_lo) * j / (n2 - 1); }
};

struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace jsqlab
