#pragma once

#include <vector>

#include "jsqlab/params.hpp"

namespace jsqlab {

struct DriftConstants {
    double c = 0.0;
    double d = 0.0;
    double alpha = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double beta = 0.0;
};

// The drift coefficients of the Foster-Lyapunov inequality G_Y V <= -a c V + a d
// for V = exp(alpha (f1 + f2)) at fluid argument; general form, not the
// epsilon specialization.
DriftConstants drift_constants(double beta, double kappa1, double kappa2, double alpha);

// V(y) = exp(alpha (f1(y/sqrt(n)) + f2(y/sqrt(n)))) >= 1.
double lyapunov_value(const ModelParams& params, double kappa1, double kappa2, double alpha,
                      const DiffusionPoint& y);

// Diffusion generator (-y1 + y2 - beta) f1 - y2 f2 + f11 applied to a jet
// taken at diffusion scale at the point y.
double apply_GY(const FieldJet& jet_at_y, double beta, const DiffusionPoint& y);

struct DriftReport {
    GridSpec grid;
    DriftConstants consts;
    double max_expgen = -1e300;         // max of G_Y V + alpha c V - alpha d
    DiffusionPoint worst;
    double max_chain_rule_resid = 0.0;  // generator identity residual
    double max_edge_gap = 0.0;          // |V1 - V2| along y1 = 0
    double min_v = 0.0;
    bool pass = false;
};

// Grid certification of the drift inequality plus the chain-rule identity and
// the sliding-boundary compatibility of V.
DriftReport verify_drift(const ModelParams& params, double kappa1, double kappa2, double alpha,
                         const GridSpec& grid);

struct DriftScanRow {
    double alpha = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double c = 0.0;
    double d = 0.0;
    bool c_positive = false;
};

std::vector<DriftScanRow> drift_constant_scan(double beta, const std::vector<double>& alphas,
                                              const std::vector<double>& kappa1s,
                                              const std::vector<double>& kappa2s);

}  // namespace jsqlab
