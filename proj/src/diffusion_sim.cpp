#include "jsqlab/diffusion_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jsqlab/parallel.hpp"
#include "jsqlab/rng.hpp"

namespace jsqlab {

void SdeConfig::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("SdeConfig: step > 0 required");
    if (step >= 1.0) throw std::invalid_argument("SdeConfig: step must be < 1");
    if (!(burn_in < horizon)) throw std::invalid_argument("SdeConfig: burn_in < horizon required");
    if (thinning < 1) throw std::invalid_argument("SdeConfig: thinning >= 1 required");
}

SdeState step_euler(const SdeState& state, double beta, double h, double gaussian) {
    if (!(h > 0.0)) throw std::invalid_argument("step_euler: h > 0 required");
    if (h >= 1.0) throw std::invalid_argument("step_euler: h must be < 1");
    SdeState out = state;
    double y1 = state.y.y1 + (-state.y.y1 + state.y.y2 - beta) * h + std::sqrt(2.0 * h) * gaussian;
    double y2 = state.y.y2 - state.y.y2 * h;
    if (y1 > 0.0) {
        double du = y1;
        y1 = 0.0;
        y2 += du;
        out.u_cum += du;
    }
    out.y.y1 = y1;
    out.y.y2 = std::max(y2, 0.0);  // guard; the drift alone cannot overshoot for h < 1
    return out;
}

SdeStationaryResult simulate_stationary(double beta, const SdeConfig& config) {
    config.validate();
    SdeStationaryResult res;
    res.config = config;
    res.beta = beta;

    Rng rng(config.seed);
    SdeState s;
    long long total_steps = static_cast<long long>(std::ceil(config.horizon / config.step));
    long long burn_steps = static_cast<long long>(std::ceil(config.burn_in / config.step));
    for (long long k = 0; k < total_steps; ++k) {
        s = step_euler(s, beta, config.step, rng.normal());
        if (k >= burn_steps && (k - burn_steps) % config.thinning == 0)
            res.samples.push_back({s.y.y1, s.y.y2});
    }

    int batches = config.batch_count;
    std::vector<double> b1(batches, 0.0), b2(batches, 0.0);
    std::vector<long long> cnt(batches, 0);
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
        int b = std::min<int>(batches - 1,
                              static_cast<int>(i * static_cast<std::size_t>(batches) /
                                               res.samples.size()));
        b1[b] += res.samples[i][0];
        b2[b] += res.samples[i][1];
        cnt[b] += 1;
    }
    for (int b = 0; b < batches; ++b) {
        if (cnt[b] == 0) continue;
        b1[b] /= cnt[b];
        b2[b] /= cnt[b];
    }
    res.mean_y1 = batch_means_ci(b1);
    res.mean_y2 = batch_means_ci(b2);
    return res;
}

double interchange_distance(const std::vector<std::array<double, 2>>& a,
                            const std::vector<std::array<double, 2>>& b) {
    if (a.size() < 10'000 || b.size() < 10'000)
        throw std::invalid_argument("interchange_distance: >= 1e4 samples required on each side");
    std::vector<double> a1(a.size()), a2(a.size()), b1(b.size()), b2(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a1[i] = a[i][0];
        a2[i] = a[i][1];
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        b1[i] = b[i][0];
        b2[i] = b[i][1];
    }
    return wasserstein1(std::move(a1), std::move(b1)) + wasserstein1(std::move(a2), std::move(b2));
}

DecayProbeResult ergodic_decay_probe(double beta, const DiffusionPoint& y_a,
                                     const DiffusionPoint& y_b,
                                     const std::vector<double>& checkpoints, int replicas,
                                     std::uint64_t seed, bool common_random_numbers, double step) {
    if (replicas < 1000) throw std::invalid_argument("ergodic_decay_probe: replicas >= 1e3 required");
    std::vector<double> cps = checkpoints;
    std::sort(cps.begin(), cps.end());
    DecayProbeResult out;
    out.common_random_numbers = common_random_numbers;
    out.replicas = replicas;
    out.seed = seed;

    std::size_t ncp = cps.size();
    std::vector<std::vector<double>> a1(ncp), a2(ncp), bb1(ncp), bb2(ncp);
    for (auto& v : a1) v.resize(replicas);
    for (auto& v : a2) v.resize(replicas);
    for (auto& v : bb1) v.resize(replicas);
    for (auto& v : bb2) v.resize(replicas);

    parallel_for(replicas, [&](int r) {
        Rng rng_a(seed + 2ull * r);
        Rng rng_b(common_random_numbers ? seed + 2ull * r : seed + 2ull * r + 1ull);
        SdeState sa, sb;
        sa.y = y_a;
        sb.y = y_b;
        double t = 0.0;
        for (std::size_t c = 0; c < ncp; ++c) {
            while (t < cps[c]) {
                double h = std::min(step, cps[c] - t);
                double ga = rng_a.normal();
                double gb = common_random_numbers ? ga : rng_b.normal();
                sa = step_euler(sa, beta, h, ga);
                sb = step_euler(sb, beta, h, gb);
                t += h;
            }
            a1[c][r] = sa.y.y1;
            a2[c][r] = sa.y.y2;
            bb1[c][r] = sb.y.y1;
            bb2[c][r] = sb.y.y2;
        }
    });

    for (std::size_t c = 0; c < ncp; ++c) {
        double d = wasserstein1(a1[c], bb1[c]) + wasserstein1(a2[c], bb2[c]);
        out.rows.push_back(DecayProbeRow{cps[c], d});
    }
    return out;
}

}  // namespace jsqlab
