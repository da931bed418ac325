#include "jsqlab/lyapunov_drift.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "jsqlab/parallel.hpp"
#include "jsqlab/special_fn.hpp"
#include "jsqlab/stein_solutions.hpp"

namespace jsqlab {

DriftConstants drift_constants(double beta, double kappa1, double kappa2, double alpha) {
    if (!(beta > 0.0 && beta < kappa1 && kappa1 < kappa2))
        throw std::invalid_argument("drift_constants: beta < kappa1 < kappa2 required");
    if (!(alpha > 0.0)) throw std::invalid_argument("drift_constants: alpha > 0 required");
    DriftConstants dc;
    dc.alpha = alpha;
    dc.kappa1 = kappa1;
    dc.kappa2 = kappa2;
    dc.beta = beta;
    const double dk = kappa2 - kappa1;
    const double logratio = std::log((kappa2 - beta) / (kappa1 - beta));
    const double grad_sum = 4.0 / dk * logratio + 1.0 / beta;
    dc.c = 1.0 - 12.0 / (dk * dk) * logratio -
           1.0 / (beta * (kappa1 - beta)) *
               (1.0 + kappa1 / (kappa1 - beta) * (4.0 * (kappa1 - beta) / dk)) -
           alpha * grad_sum * grad_sum;
    dc.d = std::pow((kappa2 - beta) / (kappa1 - beta) * kappa2 / kappa1, alpha) *
           std::exp(alpha * dk / beta);
    return dc;
}

double apply_GY(const FieldJet& jet_at_y, double beta, const DiffusionPoint& y) {
    return (-y.y1 + y.y2 - beta) * jet_at_y.f1 - y.y2 * jet_at_y.f2 + jet_at_y.f11;
}

namespace {

struct VJet {
    double v = 0.0, v1 = 0.0, v2 = 0.0, v11 = 0.0;
};

VJet v_jet_at(const ModelParams& params, double kappa1, double kappa2, double alpha,
              const DiffusionPoint& y) {
    const double rt = params.sqrt_n();
    FluidPoint x{y.y1 / rt, y.y2 / rt};
    FieldJet j1 = f1_jet(params, kappa1, kappa2, x);
    FieldJet j2 = f2_jet(params, kappa1, kappa2, x).jet;
    double F = j1.f + j2.f;
    double F1 = j1.f1 + j2.f1;
    double F11 = j1.f11 + j2.f11;
    double F2 = j1.f2 + j2.f2;
    VJet vj;
    vj.v = std::exp(alpha * F);
    vj.v1 = alpha * vj.v * F1 / rt;
    vj.v2 = alpha * vj.v * F2 / rt;
    vj.v11 = alpha * vj.v * F11 / static_cast<double>(params.n) +
             alpha * alpha * vj.v * F1 * F1 / static_cast<double>(params.n);
    return vj;
}

}  // namespace

double lyapunov_value(const ModelParams& params, double kappa1, double kappa2, double alpha,
                      const DiffusionPoint& y) {
    if (y.y1 > 0.0 || y.y2 < 0.0) throw std::domain_error("lyapunov_value: y outside Omega");
    return v_jet_at(params, kappa1, kappa2, alpha, y).v;
}

DriftReport verify_drift(const ModelParams& params, double kappa1, double kappa2, double alpha,
                         const GridSpec& grid) {
    grid.validate();
    if (grid.scale != GridScale::Diffusion)
        throw std::invalid_argument("verify_drift: diffusion-scale grid required");
    DriftReport rep;
    rep.grid = grid;
    rep.consts = drift_constants(params.beta, kappa1, kappa2, alpha);
    rep.min_v = 1e300;

    const double rt = params.sqrt_n();
    const double k1f = kappa1 / rt, k2f = kappa2 / rt;
    const SmoothingSpec spec(k1f, k2f);

    std::mutex mu;
    parallel_for(grid.n1, [&](int i) {
        double y1 = grid.x1_at(i);
        double local_max = -1e300, local_chain = 0.0, local_minv = 1e300;
        DiffusionPoint local_worst;
        for (int j = 0; j < grid.n2; ++j) {
            DiffusionPoint y{y1, grid.x2_at(j)};
            FluidPoint x{y.y1 / rt, y.y2 / rt};
            FieldJet j1 = f1_jet(params, kappa1, kappa2, x);
            FieldJet j2 = f2_jet(params, kappa1, kappa2, x).jet;
            double F = j1.f + j2.f;
            double F1 = j1.f1 + j2.f1;
            double F2 = j1.f2 + j2.f2;
            double F11 = j1.f11 + j2.f11;
            double v = std::exp(alpha * F);
            double v1 = alpha * v * F1 / rt;
            double v2c = alpha * v * F2 / rt;
            double v11 = (alpha * F11 + alpha * alpha * F1 * F1) * v / params.n;
            double gyv = (-y.y1 + y.y2 - params.beta) * v1 - y.y2 * v2c + v11;

            double lhs = gyv + alpha * rep.consts.c * v - alpha * rep.consts.d;
            if (lhs > local_max) {
                local_max = lhs;
                local_worst = y;
            }
            // first display in the ergodicity proof: G_Y V /(alpha V) equals
            // -phi(-x1) - phi(x2) + (F11 + alpha F1^2)/n
            double direct = -smooth_indicator(spec, -x.x1, 0) - smooth_indicator(spec, x.x2, 0) +
                            (F11 + alpha * F1 * F1) / params.n;
            local_chain = std::max(local_chain, std::abs(gyv / (alpha * v) - direct));
            local_minv = std::min(local_minv, v);
        }
        std::lock_guard<std::mutex> lock(mu);
        if (local_max > rep.max_expgen) {
            rep.max_expgen = local_max;
            rep.worst = local_worst;
        }
        rep.max_chain_rule_resid = std::max(rep.max_chain_rule_resid, local_chain);
        rep.min_v = std::min(rep.min_v, local_minv);
    });

    for (int j = 0; j < grid.n2; ++j) {
        DiffusionPoint y{0.0, grid.x2_at(j)};
        VJet vj = v_jet_at(params, kappa1, kappa2, alpha, y);
        rep.max_edge_gap = std::max(rep.max_edge_gap, std::abs(vj.v1 - vj.v2));
    }
    rep.pass = rep.max_expgen <= 1e-8 && rep.max_edge_gap <= 1e-8;
    return rep;
}

std::vector<DriftScanRow> drift_constant_scan(double beta, const std::vector<double>& alphas,
                                              const std::vector<double>& kappa1s,
                                              const std::vector<double>& kappa2s) {
    std::vector<DriftScanRow> rows;
    for (double a : alphas)
        for (double k1 : kappa1s)
            for (double k2 : kappa2s) {
                if (!(beta < k1 && k1 < k2)) continue;
                DriftConstants dc = drift_constants(beta, k1, k2, a);
                rows.push_back(DriftScanRow{a, k1, k2, dc.c, dc.d, dc.c > 0.0});
            }
    return rows;
}

}  // namespace jsqlab
