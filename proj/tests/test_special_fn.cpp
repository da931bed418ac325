#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "jsqlab/special_fn.hpp"

using namespace jsqlab;

namespace {

// independent root of w*exp(w) = target on [lo, hi]
double bisect_wexp(double target, double lo, double hi) {
    auto g = [&](double w) { return w * std::exp(w) - target; };
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi);
        if (g(lo) * g(m) <= 0.0)
            hi = m;
        else
            lo = m;
    }
    return 0.5 * (lo + hi);
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("lambert_w0 pinned values") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambert_w0(2.0 * std::exp(2.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lambert_wm1 pinned values and bisection oracle") {
    CHECK(lambert_wm1(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(lambert_wm1(-2.0 * std::exp(-2.0)) == doctest::Approx(-2.0).epsilon(1e-13));
    double oracle = bisect_wexp(-0.1, -10.0, -1.0);
    CHECK(oracle == doctest::Approx(-3.5772).epsilon(1e-4));
    CHECK(lambert_wm1(-0.1) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("lambert w0 round trip over the full range") {
    const double e_inv = std::exp(-1.0);
    double worst = 0.0;
    // offsets from the branch point covering [-1/e + 1e-12, ~0]
    for (int i = 0; i < 5000; ++i) {
        double s = -12.0 + (12.0 + std::log10(e_inv)) * i / 4999.0;
        double x = -e_inv + std::pow(10.0, s);
        double w = lambert_w0(x);
        worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-30));
    }
    for (int i = 0; i < 5000; ++i) {
        double s = -12.0 + 20.0 * i / 4999.0;
        double x = std::pow(10.0, s);
        double w = lambert_w0(x);
        worst = std::max(worst, std::abs(w * std::exp(w) - x) / x);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("lambert wm1 round trip") {
    const double e_inv = std::exp(-1.0);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        double s = -12.0 + (12.0 + std::log10(e_inv - 1e-13)) * i / 4999.0;
        double x = -e_inv + std::pow(10.0, s);
        if (x >= 0.0) continue;
        double w = lambert_wm1(x);
        worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::abs(x));
    }
    for (int i = 0; i < 5000; ++i) {
        double s = 1.0 + 249.0 * i / 4999.0;
        double x = -std::pow(10.0, -s);
        double w = lambert_wm1(x);
        worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::abs(x));
    }
    CHECK(worst <= 1e-11);
}

TEST_CASE("branch order and inverse identity") {
    for (int i = 1; i < 100; ++i) {
        double x = -std::exp(-1.0) * i / 100.0;
        CHECK(lambert_wm1(x) <= -1.0 + 1e-12);
        CHECK(lambert_w0(x) >= -1.0 - 1e-12);
        CHECK(lambert_wm1(x) <= lambert_w0(x) + 1e-12);
    }
    for (int i = 0; i <= 200; ++i) {
        double x = -1.0 + 11.0 * i / 200.0;
        double back = lambert_w0(x * std::exp(x));
        CHECK(back == doctest::Approx(x).epsilon(1e-11));
    }
}

TEST_CASE("lambert_w0 strictly increasing") {
    double prev = lambert_w0(-std::exp(-1.0) + 1e-10);
    for (int i = 1; i <= 400; ++i) {
        double x = -std::exp(-1.0) + 1e-10 + (5.0 + std::exp(-1.0)) * i / 400.0;
        double w = lambert_w0(x);
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("lambert_w0_deriv") {
    CHECK(lambert_w0_deriv(std::exp(1.0)) ==
          doctest::Approx(1.0 / (2.0 * std::exp(1.0))).epsilon(1e-13));
    double fd0 = central_diff([](double x) { return lambert_w0(x); }, 0.0, 1e-6);
    CHECK(lambert_w0_deriv(0.0) == doctest::Approx(fd0).epsilon(1e-6));
    for (double x : {-0.3, -0.05, 0.2, 1.7, 40.0, 2000.0}) {
        double fd = central_diff([](double u) { return lambert_w0(u); }, x, 1e-6);
        CHECK(lambert_w0_deriv(x) == doctest::Approx(fd).epsilon(1e-6));
        CHECK(lambert_w0_deriv(x) > 0.0);
    }
    CHECK_THROWS_AS(lambert_w0_deriv(-std::exp(-1.0)), std::domain_error);
}

TEST_CASE("lambert_w0_log matches direct evaluation and extends range") {
    for (double y : {-5.0, 0.0, 3.0, 25.0}) {
        CHECK(lambert_w0_log(y) == doctest::Approx(lambert_w0(std::exp(y))).epsilon(1e-13));
    }
    double w = lambert_w0_log(1000.0);  // exp(1000) overflows a double
    CHECK(w + std::log(w) == doctest::Approx(1000.0).epsilon(1e-13));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(lambert_w0(-std::exp(-1.0) - 1e-9), std::domain_error);
    CHECK_THROWS_AS(lambert_wm1(-std::exp(-1.0) - 1e-9), std::domain_error);
    CHECK_THROWS_AS(lambert_wm1(0.1), std::domain_error);
    CHECK_THROWS_AS(SmoothingSpec(3.0, 1.0), std::invalid_argument);
    SmoothingSpec s(0.0, 1.0);
    CHECK_THROWS_AS(smooth_indicator(s, 0.5, 3), std::invalid_argument);
}

TEST_CASE("smooth indicator pinned values") {
    SmoothingSpec s(1.0, 3.0);
    CHECK(smooth_indicator(s, 0.5, 0) == 0.0);
    CHECK(smooth_indicator(s, 4.0, 0) == 1.0);
    CHECK(smooth_indicator(s, 2.0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    for (int i = 0; i <= 400; ++i) {
        double x = 0.5 + 3.0 * i / 400.0;
        CHECK(std::abs(smooth_indicator(s, x, 1)) <= 4.0 / (3.0 - 1.0) + 1e-12);
        CHECK(std::abs(smooth_indicator(s, x, 2)) <= 12.0 / 4.0 + 1e-12);
    }
}

TEST_CASE("smooth indicator continuity and monotonicity") {
    SmoothingSpec s(0.2, 1.7);
    double knots[3] = {0.2, 0.95, 1.7};
    for (double k : knots) {
        for (int order : {0, 1}) {
            double left = smooth_indicator(s, k - 1e-13, order);
            double right = smooth_indicator(s, k + 1e-13, order);
            CHECK(std::abs(left - right) <= 1e-11);
        }
    }
    double prev = -1.0;
    for (int i = 0; i <= 500; ++i) {
        double x = -0.5 + 3.0 * i / 500.0;
        double v = smooth_indicator(s, x, 0);
        CHECK(v >= prev - 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("smooth indicator derivative consistency") {
    SmoothingSpec s(0.5, 2.5);
    for (int i = 0; i <= 300; ++i) {
        double x = 0.0 + 3.0 * i / 300.0;
        double fd = central_diff([&](double u) { return smooth_indicator(s, u, 0); }, x, 1e-7);
        CHECK(std::abs(smooth_indicator(s, x, 1) - fd) <= 1e-7);
    }
}
