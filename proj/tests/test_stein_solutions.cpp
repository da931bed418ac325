#include <doctest.h>

#include <cmath>
#include <random>

#include "jsqlab/fluid_model.hpp"
#include "jsqlab/special_fn.hpp"
#include "jsqlab/stein_solutions.hpp"

using namespace jsqlab;

namespace {

const ModelParams kP(100, 1.0);
const double kRt = kP.sqrt_n();

// distance-to-boundary guard for finite-difference checks
bool fd_safe_fh(const FluidPoint& x, double kappa, double band) {
    if (std::abs(x.x2 - kappa / kRt) < band) return false;
    double nu = gamma_solve(kP, kappa, x.x1).nu_star;
    if (std::abs(x.x2 - nu) < band) return false;
    if (x.x1 > -band || x.x2 < band) return false;
    return true;
}

}  // namespace

TEST_CASE("f_h_jet branch structure") {
    double kappa = 2.0, k = kappa / kRt;
    FieldJet zero = f_h_jet(kP, kappa, FluidPoint{-1.0, 0.5 * k});
    CHECK(zero.f == 0.0);
    CHECK(zero.f1 == 0.0);
    CHECK(zero.f2 == 0.0);
    CHECK(zero.f11 == 0.0);
    CHECK(zero.f22 == 0.0);

    FluidPoint mid{-3.0, 0.5};
    REQUIRE(classify_vs_gamma(kP, kappa, mid) == GammaSide::Below);
    FieldJet m = f_h_jet(kP, kappa, mid);
    CHECK(m.f1 == 0.0);
    CHECK(m.f2 == doctest::Approx(1.0 - kappa / (mid.x2 * kRt)).epsilon(1e-14));
    CHECK(m.f11 == 0.0);
    CHECK(m.f12 == 0.0);
    CHECK(m.f22 == doctest::Approx(kappa / (kRt * mid.x2 * mid.x2)).epsilon(1e-14));
}

TEST_CASE("f_h_jet continuity across the separating sets") {
    double kappa = 2.0, k = kappa / kRt;
    // adjacent branch formulas evaluated at the same boundary point
    for (double x1 : {-0.5, -2.0}) {
        FluidPoint x{x1, k};
        FieldJet lo = f_h_jet_branch(kP, kappa, x, 0);
        FieldJet hi = f_h_jet_branch(kP, kappa, x, 1);
        CHECK(std::abs(lo.f - hi.f) <= 1e-9);
        CHECK(std::abs(lo.f1 - hi.f1) <= 1e-9);
        CHECK(std::abs(lo.f2 - hi.f2) <= 1e-9);
    }
    for (double x1 : {-0.4, -1.2}) {
        double nu = gamma_solve(kP, kappa, x1).nu_star;
        FluidPoint x{x1, nu};
        FieldJet below = f_h_jet_branch(kP, kappa, x, 1);
        FieldJet above = f_h_jet_branch(kP, kappa, x, 2);
        CHECK(std::abs(below.f - above.f) <= 1e-9);
        CHECK(std::abs(below.f1 - above.f1) <= 1e-9);
        CHECK(std::abs(below.f2 - above.f2) <= 1e-9);
    }
}

TEST_CASE("f_h_jet gradients match finite differences") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> u1(-3.0, -0.02), u2(0.05, 3.0);
    double kappa = 2.0;
    int checked = 0;
    while (checked < 120) {
        FluidPoint x{u1(gen), u2(gen)};
        if (!fd_safe_fh(x, kappa, 1e-4)) continue;
        FieldJet jet = f_h_jet(kP, kappa, x);
        double h = 1e-6;
        auto fat = [&](double a, double b) { return f_h_jet(kP, kappa, FluidPoint{a, b}).f; };
        double fd1 = (fat(x.x1 + h, x.x2) - fat(x.x1 - h, x.x2)) / (2.0 * h);
        double fd2 = (fat(x.x1, x.x2 + h) - fat(x.x1, x.x2 - h)) / (2.0 * h);
        CHECK(std::abs(jet.f1 - fd1) <= 1e-6 * std::max(1.0, std::abs(jet.f1)));
        CHECK(std::abs(jet.f2 - fd2) <= 1e-6 * std::max(1.0, std::abs(jet.f2)));

        double h2 = 1e-5;
        auto j_at = [&](double a, double b) { return f_h_jet(kP, kappa, FluidPoint{a, b}); };
        double fd11 = (j_at(x.x1 + h2, x.x2).f1 - j_at(x.x1 - h2, x.x2).f1) / (2.0 * h2);
        double fd12 = (j_at(x.x1, x.x2 + h2).f1 - j_at(x.x1, x.x2 - h2).f1) / (2.0 * h2);
        double fd22 = (j_at(x.x1, x.x2 + h2).f2 - j_at(x.x1, x.x2 - h2).f2) / (2.0 * h2);
        CHECK(std::abs(jet.f11 - fd11) <= 1e-5 * std::max(1.0, std::abs(jet.f11)));
        CHECK(std::abs(jet.f12 - fd12) <= 1e-5 * std::max(1.0, std::abs(jet.f12)));
        CHECK(std::abs(jet.f22 - fd22) <= 1e-5 * std::max(1.0, std::abs(jet.f22)));
        ++checked;
    }
}

TEST_CASE("apply_L basics") {
    FieldJet zero;
    CHECK(apply_L(kP, zero, FluidPoint{-1.0, 1.0}) == 0.0);
    FieldJet linear;  // f = x2
    linear.f2 = 1.0;
    CHECK(apply_L(kP, linear, FluidPoint{-1.0, 0.7}) == doctest::Approx(-0.7));
}

TEST_CASE("f_h solves its PDE pointwise") {
    double kappa = 2.0, k = kappa / kRt;
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> u1(-3.0, 0.0), u2(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        FluidPoint x{u1(gen), u2(gen)};
        FieldJet jet = f_h_jet(kP, kappa, x);
        double resid = apply_L(kP, jet, x) + std::max(x.x2 - k, 0.0);
        CHECK(std::abs(resid) <= 1e-10);
    }
}

TEST_CASE("f_h value equals the trajectory integral") {
    double kappa = 2.0, k = kappa / kRt;
    auto h = [&](const FluidPoint& v) { return std::max(v.x2 - k, 0.0); };
    ValueIntegralOptions opts;
    opts.tol = 1e-9;
    opts.x2_levels = {k};
    std::mt19937 gen(29);
    std::uniform_real_distribution<double> u1(-3.0, 0.0), u2(0.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        FluidPoint x{u1(gen), u2(gen)};
        double direct = f_h_jet(kP, kappa, x).f;
        double oracle = value_integral(kP, h, x, opts);
        CHECK(std::abs(direct - oracle) <= 1e-7);
    }
}

TEST_CASE("f1_jet zero case and bounds") {
    double k1 = 1.5, k2 = 2.5;
    FieldJet z = f1_jet(kP, k1, k2, FluidPoint{-0.1, 1.0});
    CHECK(z.f == 0.0);
    CHECK(z.f1 == 0.0);
    double bound = 4.0 * kRt / (k2 - k1) * std::log((k2 - kP.beta) / (k1 - kP.beta));
    for (double x1 : {-0.05, -0.16, -0.2, -0.3, -1.0, -3.0}) {
        for (double x2 : {0.0, 0.4, 1.7}) {
            FieldJet j = f1_jet(kP, k1, k2, FluidPoint{x1, x2});
            CHECK(std::abs(j.f1) <= bound + 1e-9);
            CHECK(j.f >= 0.0);
        }
    }
}

TEST_CASE("f1_jet solves its PDE") {
    double k1 = 1.5, k2 = 2.5;
    SmoothingSpec spec(k1 / kRt, k2 / kRt);
    std::mt19937 gen(31);
    std::uniform_real_distribution<double> u1(-3.0, 0.0), u2(0.0, 3.0);
    for (int i = 0; i < 120; ++i) {
        FluidPoint x{u1(gen), u2(gen)};
        FieldJet jet = f1_jet(kP, k1, k2, x);
        double resid = apply_L(kP, jet, x) + smooth_indicator(spec, -x.x1, 0);
        CHECK(std::abs(resid) <= 1e-8);
    }
}

TEST_CASE("f1_jet derivatives match finite differences") {
    double k1 = 1.5, k2 = 2.5;
    std::mt19937 gen(37);
    std::uniform_real_distribution<double> u1(-3.0, -0.01), u2(0.02, 3.0);
    int checked = 0;
    while (checked < 60) {
        FluidPoint x{u1(gen), u2(gen)};
        if (std::abs(x.x1 + k1 / kRt) < 1e-4 || std::abs(x.x1 + k2 / kRt) < 1e-4) continue;
        FieldJet jet = f1_jet(kP, k1, k2, x);
        double h = 1e-6;
        auto fat = [&](double a, double b) { return f1_jet(kP, k1, k2, FluidPoint{a, b}).f; };
        double fd1 = (fat(x.x1 + h, x.x2) - fat(x.x1 - h, x.x2)) / (2.0 * h);
        double fd2 = (fat(x.x1, x.x2 + h) - fat(x.x1, x.x2 - h)) / (2.0 * h);
        CHECK(std::abs(jet.f1 - fd1) <= 2e-6 * std::max(1.0, std::abs(jet.f1)));
        CHECK(std::abs(jet.f2 - fd2) <= 2e-6 * std::max(1.0, std::abs(jet.f2)));
        double h2 = 1e-5;
        auto f1at = [&](double a, double b) { return f1_jet(kP, k1, k2, FluidPoint{a, b}).f1; };
        auto f2at = [&](double a, double b) { return f1_jet(kP, k1, k2, FluidPoint{a, b}).f2; };
        double fd11 = (f1at(x.x1 + h2, x.x2) - f1at(x.x1 - h2, x.x2)) / (2.0 * h2);
        double fd22 = (f2at(x.x1, x.x2 + h2) - f2at(x.x1, x.x2 - h2)) / (2.0 * h2);
        CHECK(std::abs(jet.f11 - fd11) <= 1e-4 * std::max(1.0, std::abs(jet.f11)));
        CHECK(std::abs(jet.f22 - fd22) <= 1e-4 * std::max(1.0, std::abs(jet.f22)));
        ++checked;
    }
}

TEST_CASE("f1_jet continuity across its case boundaries") {
    double k1 = 1.5, k2 = 2.5;
    for (double edge : {k1 / kRt, k2 / kRt}) {
        for (double x2 : {0.0, 0.5, 2.0}) {
            FieldJet l = f1_jet(kP, k1, k2, FluidPoint{-edge - 1e-10, x2});
            FieldJet r = f1_jet(kP, k1, k2, FluidPoint{-edge + 1e-10, x2});
            CHECK(std::abs(l.f - r.f) <= 1e-9);
            CHECK(std::abs(l.f1 - r.f1) <= 1e-9);
            CHECK(std::abs(l.f2 - r.f2) <= 1e-9);
            CHECK(std::abs(l.f11 - r.f11) <= 1e-8);
        }
    }
}

TEST_CASE("f2_jet region structure") {
    double k1 = 1.5, k2 = 2.5;
    F2Result s0 = f2_jet(kP, k1, k2, FluidPoint{-1.0, 0.1});
    CHECK(s0.region == RegionLabel::S0);
    CHECK(s0.jet.f == 0.0);
    CHECK(s0.jet.f2 == 0.0);

    FluidPoint deep{-0.1, 2.9};
    F2Result s3 = f2_jet(kP, k1, k2, deep);
    REQUIRE(s3.region == RegionLabel::S3);
    double tau = hitting_time(kP, deep);
    CHECK(s3.jet.f1 == doctest::Approx(kRt / kP.beta * std::exp(-tau)).epsilon(1e-12));
    CHECK(std::abs(s3.jet.f1) <= kRt / kP.beta + 1e-12);
}

TEST_CASE("f2_jet solves its PDE") {
    double k1 = 1.5, k2 = 2.5;
    SmoothingSpec spec(k1 / kRt, k2 / kRt);
    std::mt19937 gen(41);
    std::uniform_real_distribution<double> u1(-3.0, 0.0), u2(0.0, 3.0);
    for (int i = 0; i < 120; ++i) {
        FluidPoint x{u1(gen), u2(gen)};
        FieldJet jet = f2_jet(kP, k1, k2, x).jet;
        double resid = apply_L(kP, jet, x) + smooth_indicator(spec, x.x2, 0);
        CHECK(std::abs(resid) <= 1e-8);
    }
}

TEST_CASE("f2_jet value equals the trajectory integral") {
    double k1 = 1.5, k2 = 2.5;
    SmoothingSpec spec(k1 / kRt, k2 / kRt);
    auto h = [&](const FluidPoint& v) { return smooth_indicator(spec, v.x2, 0); };
    ValueIntegralOptions opts;
    opts.tol = 1e-9;
    opts.x2_levels = {k1 / kRt, 0.5 * (k1 + k2) / kRt, k2 / kRt};
    std::mt19937 gen(43);
    std::uniform_real_distribution<double> u1(-3.0, 0.0), u2(0.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        FluidPoint x{u1(gen), u2(gen)};
        double direct = f2_jet(kP, k1, k2, x).jet.f;
        double oracle = value_integral(kP, h, x, opts);
        CHECK(std::abs(direct - oracle) <= 1e-7);
    }
}

TEST_CASE("f2_jet derivatives match finite differences") {
    double k1 = 1.5, k2 = 2.5;
    std::mt19937 gen(47);
    std::uniform_real_distribution<double> u1(-3.0, -0.01), u2(0.05, 3.0);
    int checked = 0;
    while (checked < 60) {
        FluidPoint x{u1(gen), u2(gen)};
        if (std::abs(x.x2 - k1 / kRt) < 1e-4 || std::abs(x.x2 - k2 / kRt) < 1e-4) continue;
        double nu1 = gamma_solve(kP, k1, x.x1).nu_star;
        double nu2 = gamma_solve(kP, k2, x.x1).nu_star;
        if (std::abs(x.x2 - nu1) < 1e-4 || std::abs(x.x2 - nu2) < 1e-4) continue;
        FieldJet jet = f2_jet(kP, k1, k2, x).jet;
        double h = 1e-6;
        auto fat = [&](double a, double b) { return f2_jet(kP, k1, k2, FluidPoint{a, b}).jet.f; };
        double fd1 = (fat(x.x1 + h, x.x2) - fat(x.x1 - h, x.x2)) / (2.0 * h);
        double fd2 = (fat(x.x1, x.x2 + h) - fat(x.x1, x.x2 - h)) / (2.0 * h);
        CHECK(std::abs(jet.f1 - fd1) <= 2e-6 * std::max(1.0, std::abs(jet.f1)));
        CHECK(std::abs(jet.f2 - fd2) <= 2e-6 * std::max(1.0, std::abs(jet.f2)));
        double h2 = 1e-5;
        auto f1at = [&](double a, double b) { return f2_jet(kP, k1, k2, FluidPoint{a, b}).jet.f1; };
        auto f2at = [&](double a, double b) { return f2_jet(kP, k1, k2, FluidPoint{a, b}).jet.f2; };
        double fd11 = (f1at(x.x1 + h2, x.x2) - f1at(x.x1 - h2, x.x2)) / (2.0 * h2);
        double fd22 = (f2at(x.x1, x.x2 + h2) - f2at(x.x1, x.x2 - h2)) / (2.0 * h2);
        CHECK(std::abs(jet.f11 - fd11) <= 1e-4 * std::max(1.0, std::abs(jet.f11)));
        CHECK(std::abs(jet.f22 - fd22) <= 1e-4 * std::max(1.0, std::abs(jet.f22)));
        ++checked;
    }
}

TEST_CASE("f2_jet continuity across region boundaries") {
    double k1 = 1.5, k2 = 2.5;
    for (double x1 : {-0.7, -2.5}) {
        FieldJet lo = f2_jet(kP, k1, k2, FluidPoint{x1, k1 / kRt - 1e-10}).jet;
        FieldJet hi = f2_jet(kP, k1, k2, FluidPoint{x1, k1 / kRt + 1e-10}).jet;
        CHECK(std::abs(lo.f - hi.f) <= 1e-9);
        CHECK(std::abs(lo.f1 - hi.f1) <= 1e-9);
        CHECK(std::abs(lo.f2 - hi.f2) <= 1e-9);
    }
    for (double x1 : {-0.4, -1.1}) {
        for (double kappa : {k1, k2}) {
            double nu = gamma_solve(kP, kappa, x1).nu_star;
            FieldJet below = f2_jet(kP, k1, k2, FluidPoint{x1, nu - 3e-10}).jet;
            FieldJet above = f2_jet(kP, k1, k2, FluidPoint{x1, nu + 3e-10}).jet;
            CHECK(std::abs(below.f - above.f) <= 1e-9);
            CHECK(std::abs(below.f1 - above.f1) <= 1e-9);
            CHECK(std::abs(below.f2 - above.f2) <= 1e-9);
            CHECK(std::abs(below.f11 - above.f11) <= 1e-8);
        }
    }
}

TEST_CASE("pde residual scan on a small grid") {
    GridSpec grid;
    grid.x1_lo = -3.0;
    grid.x1_hi = 0.0;
    grid.x2_lo = 0.0;
    grid.x2_hi = 3.0;
    grid.n1 = 21;
    grid.n2 = 21;
    PdeResidualReport fh = pde_residual_scan(kP, PdeWhich::FH, 2.0, 0.0, grid);
    CHECK(fh.max_residual <= 1e-8);
    CHECK(fh.max_boundary_gap <= 1e-8);
    PdeResidualReport f1r = pde_residual_scan(kP, PdeWhich::F1, 1.5, 2.5, grid);
    CHECK(f1r.max_residual <= 1e-7);
    CHECK(f1r.max_boundary_gap <= 1e-7);
    PdeResidualReport f2r = pde_residual_scan(kP, PdeWhich::F2, 1.5, 2.5, grid);
    CHECK(f2r.max_residual <= 1e-7);
    CHECK(f2r.max_boundary_gap <= 1e-7);
}

TEST_CASE("derivative bounds hold on a small grid") {
    GridSpec grid;
    grid.x1_lo = -5.0;
    grid.x1_hi = 0.0;
    grid.x2_lo = 0.0;
    grid.x2_hi = 5.0;
    grid.n1 = 41;
    grid.n2 = 41;
    DerivativeBoundReport fh = derivative_bound_report(kP, 2.0, grid);
    CHECK(fh.pass());
    DerivativeBoundReport pair = derivative_bound_report(kP, 1.5, 2.5, grid);
    CHECK(pair.pass());
}

TEST_CASE("f_h zero Hessian strictly below the kink level") {
    double kappa = 2.0, k = kappa / kRt;
    for (double x1 : {-0.3, -2.0})
        for (double frac : {0.1, 0.6, 0.95}) {
            FieldJet jet = f_h_jet(kP, kappa, FluidPoint{x1, frac * k});
            CHECK(jet.f11 == 0.0);
            CHECK(jet.f22 == 0.0);
        }
}
