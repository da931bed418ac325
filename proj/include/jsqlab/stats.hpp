#pragma once

#include <cstddef>
#include <vector>

namespace jsqlab {

struct MeanCI {
    double mean = 0.0;
    double half_width = 0.0;  // 95% two-sided
    int batches = 0;
};

// Two-sided 97.5% Student-t quantile.
double student_t_975(int df);

// Mean and 95% CI half-width from per-batch means (equal-weight batches).
MeanCI batch_means_ci(const std::vector<double>& batch_values);

// Exact empirical Wasserstein-1 distance between two sample sets (quantile
// coupling on the merged breakpoints); handles unequal sizes.
double wasserstein1(std::vector<double> a, std::vector<double> b);

}  // namespace jsqlab
