#include "jsqlab/stein_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "jsqlab/fluid_model.hpp"
#include "jsqlab/parallel.hpp"
#include "jsqlab/quadrature.hpp"
#include "jsqlab/special_fn.hpp"

namespace jsqlab {

namespace {

constexpr double kQuadTol = 1e-11;

void require_kappa_pair(const ModelParams& params, double kappa1, double kappa2) {
    if (!(params.beta < kappa1 && kappa1 < kappa2))
        throw std::invalid_argument("beta < kappa1 < kappa2 required");
}

// integral of phi over [a, c] (a <= c), split at the knots; Simpson is exact
// on the cubic pieces
double phi_integral(const SmoothingSpec& spec, double a, double c) {
    if (a >= c) return 0.0;
    double mid = 0.5 * (spec.lower + spec.upper);
    return integrate_with_knots([&](double u) { return smooth_indicator(spec, u, 0); }, a, c,
                                kQuadTol, {spec.lower, mid, spec.upper});
}

// integral of phi(u)/u over [a, c], 0 < a <= c
double phi_over_u_integral(const SmoothingSpec& spec, double a, double c) {
    if (a >= c) return 0.0;
    double mid = 0.5 * (spec.lower + spec.upper);
    return integrate_with_knots([&](double u) { return smooth_indicator(spec, u, 0) / u; }, a, c,
                                kQuadTol, {spec.lower, mid, spec.upper});
}

}  // namespace

FieldJet f_h_jet_branch(const ModelParams& params, double kappa, const FluidPoint& x, int branch) {
    const double b = params.b();
    const double k = kappa / params.sqrt_n();
    FieldJet jet;
    jet.has_f12 = true;
    if (branch == 0) return jet;
    if (branch == 1) {
        // trajectory decays freely past the level k before any reflection
        jet.f = x.x2 - k - k * std::log(x.x2 / k);
        jet.f2 = 1.0 - k / x.x2;
        jet.f22 = k / (x.x2 * x.x2);
        return jet;
    }
    double tau = hitting_time(params, x);
    if (!std::isfinite(tau))
        throw ConvergenceFailure("f_h_jet: infinite hitting time above the curve");
    TauGrad tg = tau_grad(params, x);
    double emt = std::exp(-tau);
    double w = x.x2 * emt;

    jet.f = x.x2 * (1.0 - emt) - k * tau + 0.5 / b * (w - k) * (w - k);
    jet.f1 = (1.0 / b) * emt * (w - k);
    jet.f2 = 1.0 - k / x.x2 + (1.0 / b) * (w - k) * ((w - b) / x.x2 + tau * emt);
    jet.f11 = (1.0 / b) * emt * emt * (w + (w - k)) / (w - b);
    jet.f12 = (1.0 / b) * (-tg.t2 * emt) * (w - k) + (1.0 / b) * emt * (emt - tg.t2 * w);
    jet.f22 = k / (x.x2 * x.x2) +
              (1.0 / b) * (emt - tg.t1 * tau * w) * ((w - b) / x.x2 + tau * emt) +
              (1.0 / b) * (w - k) * (b / (x.x2 * x.x2) - tg.t1 * tau * tau * emt);
    return jet;
}

FieldJet f_h_jet(const ModelParams& params, double kappa, const FluidPoint& x) {
    if (kappa <= params.beta) throw std::invalid_argument("f_h_jet: kappa > beta required");
    require_in_omega(x);
    const double k = kappa / params.sqrt_n();
    if (x.x2 <= k) return f_h_jet_branch(params, kappa, x, 0);
    if (classify_vs_gamma(params, kappa, x) != GammaSide::Above)
        return f_h_jet_branch(params, kappa, x, 1);
    return f_h_jet_branch(params, kappa, x, 2);
}

double apply_L(const ModelParams& params, const FieldJet& jet, const FluidPoint& x) {
    return (-x.x1 + x.x2 - params.b()) * jet.f1 - x.x2 * jet.f2;
}

FieldJet f1_jet_case(const ModelParams& params, double kappa1, double kappa2, const FluidPoint& x,
                     int which) {
    const double b = params.b();
    const double k1 = kappa1 / params.sqrt_n();
    const double k2 = kappa2 / params.sqrt_n();
    const SmoothingSpec spec(k1, k2);
    FieldJet jet;
    if (which == 0) return jet;

    double t_hi = tilde_tau(params, kappa1, x);
    double t_lo = 0.0;
    double base = 0.0;
    if (which == 2) {
        t_lo = tilde_tau(params, kappa2, x);
        base = t_lo;
    }
    // split where the trajectory's -v1 crosses the midpoint knot
    std::vector<double> knots;
    double kmid = 0.5 * (k1 + k2);
    if (-x.x1 > kmid) knots.push_back(tilde_tau(params, 0.5 * (kappa1 + kappa2), x));

    auto g = [&](double t) {
        double emt = std::exp(-t);
        return b - (x.x1 + b) * emt - x.x2 * t * emt;
    };
    auto quad = [&](const std::function<double(double)>& f) {
        return integrate_with_knots(f, t_lo, t_hi, kQuadTol, knots);
    };

    jet.f = base + quad([&](double t) { return smooth_indicator(spec, g(t), 0); });
    jet.f1 = -quad([&](double t) { return std::exp(-t) * smooth_indicator(spec, g(t), 1); });
    jet.f2 = -quad([&](double t) { return t * std::exp(-t) * smooth_indicator(spec, g(t), 1); });
    jet.f11 = quad([&](double t) { return std::exp(-2.0 * t) * smooth_indicator(spec, g(t), 2); });
    jet.f22 = quad([&](double t) {
        return t * t * std::exp(-2.0 * t) * smooth_indicator(spec, g(t), 2);
    });
    return jet;
}

FieldJet f1_jet(const ModelParams& params, double kappa1, double kappa2, const FluidPoint& x) {
    require_kappa_pair(params, kappa1, kappa2);
    require_in_omega(x);
    const double k1 = kappa1 / params.sqrt_n();
    const double k2 = kappa2 / params.sqrt_n();
    int which = x.x1 >= -k1 ? 0 : (x.x1 >= -k2 ? 1 : 2);
    return f1_jet_case(params, kappa1, kappa2, x, which);
}

FieldJet f2_jet_region(const ModelParams& params, double kappa1, double kappa2,
                       const FluidPoint& x, RegionLabel region) {
    const double b = params.b();
    const double k1 = kappa1 / params.sqrt_n();
    const double k2 = kappa2 / params.sqrt_n();
    const SmoothingSpec spec(k1, k2);
    FieldJet jet;
    if (region == RegionLabel::S0) return jet;

    if (region == RegionLabel::S1) {
        if (x.x2 <= k2) {
            jet.f = phi_over_u_integral(spec, k1, x.x2);
        } else {
            jet.f = std::log(x.x2 / k2) + phi_over_u_integral(spec, k1, k2);
        }
        double phi = smooth_indicator(spec, x.x2, 0);
        double dphi = smooth_indicator(spec, x.x2, 1);
        jet.f2 = phi / x.x2;
        jet.f22 = dphi / x.x2 - phi / (x.x2 * x.x2);
        return jet;
    }

    double tau = hitting_time(params, x);
    if (!std::isfinite(tau))
        throw ConvergenceFailure("f2_jet: infinite hitting time above the lower curve");
    TauGrad tg = tau_grad(params, x);
    double emt = std::exp(-tau);
    double w = x.x2 * emt;

    if (region == RegionLabel::S2) {
        if (x.x2 <= k2) {
            jet.f = phi_over_u_integral(spec, w, x.x2) + (1.0 / b) * phi_integral(spec, k1, w);
        } else {
            jet.f = std::log(x.x2 / k2) + phi_over_u_integral(spec, w, k2) +
                    (1.0 / b) * phi_integral(spec, k1, w);
        }
        double phi_x2 = smooth_indicator(spec, x.x2, 0);
        double phi_w = smooth_indicator(spec, w, 0);
        double dphi_x2 = smooth_indicator(spec, x.x2, 1);
        double dphi_w = smooth_indicator(spec, w, 1);
        double w2 = emt - tg.t2 * w;  // d(x2 e^{-tau})/dx2
        jet.f1 = (1.0 / b) * phi_w * emt;
        jet.f2 = (phi_x2 - phi_w) / x.x2 + phi_w * (1.0 / b) * emt * (1.0 + tau);
        jet.f11 = -tg.t1 * (1.0 / b) * emt * (w * dphi_w + phi_w);
        jet.f22 = -(phi_x2 - phi_w) / (x.x2 * x.x2) + (dphi_x2 - dphi_w * w2) / x.x2 +
                  dphi_w * w2 * (1.0 / b) * emt * (1.0 + tau) -
                  phi_w * (1.0 / b) * emt * tg.t2 * tau;
        return jet;
    }

    jet.f = tau + (w - k2) / b + (1.0 / b) * phi_integral(spec, k1, k2);
    jet.f1 = (1.0 / b) * emt;
    jet.f2 = (1.0 / b) * emt * (1.0 + tau);
    jet.f11 = -tg.t1 * (1.0 / b) * emt;
    jet.f22 = -(1.0 / b) * emt * tg.t2 * tau;
    return jet;
}

F2Result f2_jet(const ModelParams& params, double kappa1, double kappa2, const FluidPoint& x) {
    require_kappa_pair(params, kappa1, kappa2);
    require_in_omega(x);
    const double k1 = kappa1 / params.sqrt_n();
    F2Result out;
    if (x.x2 <= k1) {
        out.region = RegionLabel::S0;
    } else if (classify_vs_gamma(params, kappa1, x) != GammaSide::Above) {
        out.region = RegionLabel::S1;
    } else if (classify_vs_gamma(params, kappa2, x) != GammaSide::Above) {
        out.region = RegionLabel::S2;
    } else {
        out.region = RegionLabel::S3;
    }
    out.jet = f2_jet_region(params, kappa1, kappa2, x, out.region);
    return out;
}

namespace {

double h_for(const ModelParams& params, PdeWhich which, double kappa, double kappa2,
             const FluidPoint& x) {
    const double rt = params.sqrt_n();
    switch (which) {
        case PdeWhich::FH:
            return std::max(x.x2 - kappa / rt, 0.0);
        case PdeWhich::F1: {
            SmoothingSpec spec(kappa / rt, kappa2 / rt);
            return smooth_indicator(spec, -x.x1, 0);
        }
        case PdeWhich::F2: {
            SmoothingSpec spec(kappa / rt, kappa2 / rt);
            return smooth_indicator(spec, x.x2, 0);
        }
    }
    return 0.0;
}

FieldJet jet_for(const ModelParams& params, PdeWhich which, double kappa, double kappa2,
                 const FluidPoint& x) {
    switch (which) {
        case PdeWhich::FH:
            return f_h_jet(params, kappa, x);
        case PdeWhich::F1:
            return f1_jet(params, kappa, kappa2, x);
        case PdeWhich::F2:
            return f2_jet(params, kappa, kappa2, x).jet;
    }
    return {};
}

}  // namespace

PdeResidualReport pde_residual_scan(const ModelParams& params, PdeWhich which, double kappa,
                                    double kappa2, const GridSpec& grid) {
    grid.validate();
    if (grid.scale != GridScale::Fluid)
        throw std::invalid_argument("pde_residual_scan: fluid-scale grid required");
    PdeResidualReport rep;
    rep.which = which;
    rep.grid = grid;
    if (which == PdeWhich::FH) {
        rep.kappa = kappa;
    } else {
        rep.kappa1 = kappa;
        rep.kappa2 = kappa2;
    }

    std::vector<double> row_max(grid.n1, 0.0);
    std::vector<FluidPoint> row_worst(grid.n1);
    parallel_for(grid.n1, [&](int i) {
        double x1 = grid.x1_at(i);
        double best = -1.0;
        FluidPoint worst;
        for (int j = 0; j < grid.n2; ++j) {
            FluidPoint x{x1, grid.x2_at(j)};
            FieldJet jet = jet_for(params, which, kappa, kappa2, x);
            double r = std::abs(apply_L(params, jet, x) + h_for(params, which, kappa, kappa2, x));
            if (r > best) {
                best = r;
                worst = x;
            }
        }
        row_max[i] = best;
        row_worst[i] = worst;
    });
    for (int i = 0; i < grid.n1; ++i) {
        if (row_max[i] > rep.max_residual) {
            rep.max_residual = row_max[i];
            rep.worst = row_worst[i];
        }
    }

    for (int j = 0; j < grid.n2; ++j) {
        FluidPoint x{0.0, grid.x2_at(j)};
        FieldJet jet = jet_for(params, which, kappa, kappa2, x);
        double gap = std::abs(jet.f1 - jet.f2);
        if (gap > rep.max_boundary_gap) {
            rep.max_boundary_gap = gap;
            rep.worst_boundary = x;
        }
    }
    return rep;
}

DerivativeBoundReport derivative_bound_report(const ModelParams& params, double kappa,
                                              const GridSpec& grid) {
    grid.validate();
    const double k = kappa / params.sqrt_n();
    const double rt = params.sqrt_n();
    const double f11_bound = rt / params.beta * (kappa / (kappa - params.beta) + 1.0);
    const double f22_bound = rt / params.beta * (5.0 + 2.0 * kappa / (kappa - params.beta));
    const double eps = 1e-9;

    DerivativeBoundReport rep;
    rep.grid = grid;
    std::mutex mu;
    parallel_for(grid.n1, [&](int i) {
        double x1 = grid.x1_at(i);
        std::vector<BoundViolation> local;
        for (int j = 0; j < grid.n2; ++j) {
            FluidPoint x{x1, grid.x2_at(j)};
            FieldJet jet = f_h_jet(params, kappa, x);
            auto flag = [&](const char* name, double value, double bound) {
                local.push_back(BoundViolation{x, name, value, bound});
            };
            if (jet.f11 < -1e-12) flag("f11>=0", jet.f11, 0.0);
            if (jet.f12 < -1e-12) flag("f12>=0", jet.f12, 0.0);
            if (jet.f22 < -1e-12) flag("f22>=0", jet.f22, 0.0);
            if (x.x2 < k) {
                if (jet.f11 != 0.0) flag("f11=0 below k", jet.f11, 0.0);
                if (jet.f22 != 0.0) flag("f22=0 below k", jet.f22, 0.0);
            } else {
                if (jet.f11 > f11_bound + eps) flag("f11 upper", jet.f11, f11_bound);
                if (jet.f22 > f22_bound + eps) flag("f22 upper", jet.f22, f22_bound);
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        rep.points_checked += grid.n2;
        rep.violations.insert(rep.violations.end(), local.begin(), local.end());
    });
    return rep;
}

DerivativeBoundReport derivative_bound_report(const ModelParams& params, double kappa1,
                                              double kappa2, const GridSpec& grid) {
    grid.validate();
    require_kappa_pair(params, kappa1, kappa2);
    const double rt = params.sqrt_n();
    const double beta = params.beta;
    const double logratio = std::log((kappa2 - beta) / (kappa1 - beta));
    const double f1_1_bound = 4.0 * rt / (kappa2 - kappa1) * logratio;
    const double f1_11_bound = 12.0 * params.n / ((kappa2 - kappa1) * (kappa2 - kappa1)) * logratio;
    const double f2_1_bound = rt / beta;
    const double f2_11_bound = params.n / (beta * (kappa1 - beta)) *
                               (1.0 + 4.0 * kappa1 / (kappa2 - kappa1));
    const double box1_bound = logratio;
    const double box2_bound = std::log(kappa2 / kappa1) + (kappa2 - kappa1) / beta;
    const double k2 = kappa2 / rt;
    const double eps = 1e-9;

    DerivativeBoundReport rep;
    rep.grid = grid;
    std::mutex mu;
    parallel_for(grid.n1, [&](int i) {
        double x1 = grid.x1_at(i);
        std::vector<BoundViolation> local;
        for (int j = 0; j < grid.n2; ++j) {
            FluidPoint x{x1, grid.x2_at(j)};
            FieldJet j1 = f1_jet(params, kappa1, kappa2, x);
            FieldJet j2 = f2_jet(params, kappa1, kappa2, x).jet;
            auto flag = [&](const char* name, double value, double bound) {
                local.push_back(BoundViolation{x, name, value, bound});
            };
            if (std::abs(j1.f1) > f1_1_bound + eps) flag("|f1^(1)|", std::abs(j1.f1), f1_1_bound);
            if (std::abs(j1.f11) > f1_11_bound + eps)
                flag("|f11^(1)|", std::abs(j1.f11), f1_11_bound);
            if (std::abs(j2.f1) > f2_1_bound + eps) flag("|f1^(2)|", std::abs(j2.f1), f2_1_bound);
            if (std::abs(j2.f11) > f2_11_bound + eps)
                flag("|f11^(2)|", std::abs(j2.f11), f2_11_bound);
            if (x.x1 >= -k2 && x.x2 <= k2) {
                if (j1.f > box1_bound + eps) flag("box f^(1)", j1.f, box1_bound);
                if (j2.f > box2_bound + eps) flag("box f^(2)", j2.f, box2_bound);
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        rep.points_checked += grid.n2;
        rep.violations.insert(rep.violations.end(), local.begin(), local.end());
    });
    return rep;
}

namespace {

class FhField : public JetField {
public:
    FhField(const ModelParams& params, double kappa) : params_(params), kappa_(kappa) {}
    FieldJet eval(const FluidPoint& x) const override { return f_h_jet(params_, kappa_, x); }
    int region_id(const FluidPoint& x) const override {
        if (x.x2 <= kappa_ / params_.sqrt_n()) return 0;
        return classify_vs_gamma(params_, kappa_, x) == GammaSide::Above ? 2 : 1;
    }

private:
    ModelParams params_;
    double kappa_;
};

class F1Field : public JetField {
public:
    F1Field(const ModelParams& params, double k1, double k2) : params_(params), k1_(k1), k2_(k2) {}
    FieldJet eval(const FluidPoint& x) const override { return f1_jet(params_, k1_, k2_, x); }
    int region_id(const FluidPoint& x) const override {
        double rt = params_.sqrt_n();
        if (x.x1 >= -k1_ / rt) return 0;
        if (x.x1 >= -k2_ / rt) return 1;
        return 2;
    }

private:
    ModelParams params_;
    double k1_, k2_;
};

class F2Field : public JetField {
public:
    F2Field(const ModelParams& params, double k1, double k2) : params_(params), k1_(k1), k2_(k2) {}
    FieldJet eval(const FluidPoint& x) const override {
        return f2_jet(params_, k1_, k2_, x).jet;
    }
    int region_id(const FluidPoint& x) const override {
        return static_cast<int>(f2_jet(params_, k1_, k2_, x).region);
    }

private:
    ModelParams params_;
    double k1_, k2_;
};

}  // namespace

std::unique_ptr<JetField> make_fh_field(const ModelParams& params, double kappa) {
    return std::make_unique<FhField>(params, kappa);
}
std::unique_ptr<JetField> make_f1_field(const ModelParams& params, double kappa1, double kappa2) {
    return std::make_unique<F1Field>(params, kappa1, kappa2);
}
std::unique_ptr<JetField> make_f2_field(const ModelParams& params, double kappa1, double kappa2) {
    return std::make_unique<F2Field>(params, kappa1, kappa2);
}

}  // namespace jsqlab
