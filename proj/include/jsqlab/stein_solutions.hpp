#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jsqlab/params.hpp"

namespace jsqlab {

// Closed-form solution of L f = -((x2 - kappa/sqrt(n)) v 0) with the sliding
// boundary condition; full jet including f12.
FieldJet f_h_jet(const ModelParams& params, double kappa, const FluidPoint& x);

// The fluid operator L f = (-x1 + x2 - beta/sqrt(n)) f1 - x2 f2.
double apply_L(const ModelParams& params, const FieldJet& jet, const FluidPoint& x);

// Solution of L f = -phi(-x1) for the smoothed step with knots at
// kappa1/sqrt(n), kappa2/sqrt(n); requires beta < kappa1 < kappa2.
FieldJet f1_jet(const ModelParams& params, double kappa1, double kappa2, const FluidPoint& x);

enum class RegionLabel { S0, S1, S2, S3 };

struct F2Result {
    FieldJet jet;
    RegionLabel region = RegionLabel::S0;
};

// Solution of L f = -phi(x2), region-classified by the two curves.
F2Result f2_jet(const ModelParams& params, double kappa1, double kappa2, const FluidPoint& x);

// Branch-forced evaluators: compute a specific branch's closed form at x,
// regardless of where x lies. Used to verify that adjacent branches agree on
// the separating sets; x must be in the branch formula's natural domain.
// f_h branches: 0 = zero, 1 = free-decay, 2 = reflected.
FieldJet f_h_jet_branch(const ModelParams& params, double kappa, const FluidPoint& x, int branch);
// f1 cases: 0 = zero, 1 = inner strip, 2 = outer.
FieldJet f1_jet_case(const ModelParams& params, double kappa1, double kappa2, const FluidPoint& x,
                     int which);
FieldJet f2_jet_region(const ModelParams& params, double kappa1, double kappa2,
                       const FluidPoint& x, RegionLabel region);

enum class PdeWhich { FH, F1, F2 };

struct PdeResidualReport {
    PdeWhich which = PdeWhich::FH;
    GridSpec grid;
    double kappa = 0.0, kappa1 = 0.0, kappa2 = 0.0;
    double max_residual = 0.0;
    FluidPoint worst;
    double max_boundary_gap = 0.0;  // |f1 - f2| along x1 = 0
    FluidPoint worst_boundary;
};

PdeResidualReport pde_residual_scan(const ModelParams& params, PdeWhich which, double kappa,
                                    double kappa2, const GridSpec& grid);

struct BoundViolation {
    FluidPoint x;
    std::string check;
    double value = 0.0;
    double bound = 0.0;
};

struct DerivativeBoundReport {
    GridSpec grid;
    int points_checked = 0;
    std::vector<BoundViolation> violations;
    bool pass() const { return violations.empty(); }
};

// Grid certification of the second-derivative sign/zero/size bounds for f_h.
DerivativeBoundReport derivative_bound_report(const ModelParams& params, double kappa,
                                              const GridSpec& grid);

// Grid certification of the gradient/Hessian bounds for f1 and f2, plus the
// two value bounds on the box [-kappa2/sqrt(n), 0] x [0, kappa2/sqrt(n)].
DerivativeBoundReport derivative_bound_report(const ModelParams& params, double kappa1,
                                              double kappa2, const GridSpec& grid);

// Jet provider abstraction so the generator-expansion checks can run against
// both the closed-form solutions and simple polynomial test fields.
struct JetField {
    virtual ~JetField() = default;
    virtual FieldJet eval(const FluidPoint& x) const = 0;
    // Identifier of the closed-form branch at x; segments whose endpoints
    // disagree get split at the branch boundary before quadrature.
    virtual int region_id(const FluidPoint& x) const { return 0; }
};

std::unique_ptr<JetField> make_fh_field(const ModelParams& params, double kappa);
std::unique_ptr<JetField> make_f1_field(const ModelParams& params, double kappa1, double kappa2);
std::unique_ptr<JetField> make_f2_field(const ModelParams& params, double kappa1, double kappa2);

}  // namespace jsqlab
