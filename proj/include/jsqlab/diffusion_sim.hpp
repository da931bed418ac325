#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "jsqlab/params.hpp"
#include "jsqlab/stats.hpp"

namespace jsqlab {

struct SdeState {
    DiffusionPoint y;
    double u_cum = 0.0;  // cumulative regulator
};

struct SdeConfig {
    double step = 1e-3;
    double horizon = 5050.0;
    double burn_in = 50.0;
    std::uint64_t seed = 1;
    int thinning = 10;
    int batch_count = 30;

    void validate() const;
};

// One projected Euler step: unconstrained drift-diffusion update, overshoot of
// the first coordinate transferred to the second (the regulator enters with
// opposite signs in the two coordinates).
SdeState step_euler(const SdeState& state, double beta, double h, double gaussian);

struct SdeStationaryResult {
    SdeConfig config;
    double beta = 0.0;
    MeanCI mean_y1, mean_y2;
    std::vector<std::array<double, 2>> samples;  // thinned post-burn-in (y1, y2)
};

SdeStationaryResult simulate_stationary(double beta, const SdeConfig& config);

// Sum of per-coordinate empirical Wasserstein-1 distances; needs >= 1e4
// samples on each side.
double interchange_distance(const std::vector<std::array<double, 2>>& a,
                            const std::vector<std::array<double, 2>>& b);

struct DecayProbeRow {
    double t = 0.0;
    double distance = 0.0;
};

struct DecayProbeResult {
    std::vector<DecayProbeRow> rows;
    bool common_random_numbers = false;
    int replicas = 0;
    std::uint64_t seed = 0;
};

// Wasserstein distance between the time-t laws started from y_a and y_b,
// estimated from replica clouds at each checkpoint.
DecayProbeResult ergodic_decay_probe(double beta, const DiffusionPoint& y_a,
                                     const DiffusionPoint& y_b,
                                     const std::vector<double>& checkpoints, int replicas,
                                     std::uint64_t seed, bool common_random_numbers, double step);

}  // namespace jsqlab
