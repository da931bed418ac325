#include "jsqlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace jsqlab {

double student_t_975(int df) {
    if (df < 1) throw std::invalid_argument("student_t_975: df must be >= 1");
    boost::math::students_t_distribution<double> dist(df);
    return boost::math::quantile(dist, 0.975);
}

MeanCI batch_means_ci(const std::vector<double>& batch_values) {
    MeanCI out;
    out.batches = static_cast<int>(batch_values.size());
    if (batch_values.empty()) return out;
    double sum = 0.0;
    for (double v : batch_values) sum += v;
    out.mean = sum / batch_values.size();
    if (batch_values.size() < 2) return out;
    double ss = 0.0;
    for (double v : batch_values) ss += (v - out.mean) * (v - out.mean);
    double s = std::sqrt(ss / (batch_values.size() - 1));
    out.half_width = student_t_975(out.batches - 1) * s / std::sqrt(static_cast<double>(out.batches));
    return out;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein1: empty sample set");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t m = a.size(), n = b.size();
    std::size_t ia = 0, ib = 0;
    double u = 0.0, total = 0.0;
    while (ia < m && ib < n) {
        double ua = static_cast<double>(ia + 1) / m;
        double ub = static_cast<double>(ib + 1) / n;
        double next = std::min(ua, ub);
        total += std::abs(a[ia] - b[ib]) * (next - u);
        u = next;
        if (ua <= next) ++ia;
        if (ub <= next) ++ib;
    }
    return total;
}

}  // namespace jsqlab
