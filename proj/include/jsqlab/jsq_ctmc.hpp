#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jsqlab/params.hpp"
#include "jsqlab/stein_solutions.hpp"

namespace jsqlab {

// Occupancy-count state: q[i] = number of servers with > i buffered-or-served
// customers, nonincreasing, entries in [0, n]; implicit zeros past q.size().
struct QueueState {
    std::vector<int> q;

    int level(std::size_t i) const { return i < q.size() ? q[i] : 0; }  // 0-based
    int total() const {
        int t = 0;
        for (int v : q) t += v;
        return t;
    }
    void validate(int n) const;
};

struct TruncationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateSpaceTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using StateFn = std::function<double(const QueueState&)>;

// Generator of the JSQ chain applied to f at q; arrivals past trunc_b throw.
double apply_GQ(const ModelParams& params, const StateFn& f, const QueueState& q, int trunc_b);

// (A f)(q) = f((q1-n)/n, q2/n).
StateFn lift(const ModelParams& params, const std::function<double(double, double)>& f2d);

struct ExpansionGap {
    double lhs = 0.0;  // G_X A f (q) - L f(x)
    double rhs = 0.0;  // indicator terms + q3 strip + four Taylor remainders
};

// Two independent evaluations of the generator-expansion identity at state q.
ExpansionGap expansion_gap_check(const ModelParams& params, const JetField& jets,
                                 const QueueState& q);

struct TailStat {
    double theta = 0.0;       // threshold on X2 = Q2/n
    double prob_ge = 0.0;     // P(X2 >= theta)
    double prob_ci = 0.0;
    double excess_mean = 0.0;  // E (X2 - theta)+
    double excess_ci = 0.0;
};

struct StationaryEstimate {
    int n = 0;
    double beta = 0.0, lambda = 0.0;
    double horizon = 0.0, burn_in = 0.0;
    std::uint64_t seed = 0;
    int trunc_b = 0, batch_count = 0;
    std::vector<double> eq, eq_ci;          // E Q_i, i = 1..trunc_b (index 0 = Q1)
    std::vector<double> pblock, pblock_ci;  // P(Q1 = ... = Qk = n), k = 1..trunc_b
    std::vector<TailStat> tails;
    long long overflow_count = 0;
    long long arrival_count = 0;
    std::vector<std::pair<double, double>> samples;  // sqrt(n)(x1, x2) thinned path samples

    const TailStat& tail(double theta) const;
};

struct SimulateConfig {
    double horizon = 1000.0;
    double burn_in = 50.0;
    std::uint64_t seed = 1;
    int trunc_b = 12;
    int batch_count = 30;
    std::vector<double> tail_thetas;  // thresholds on X2
    double sample_dt = 0.0;           // > 0 records scaled path samples
    std::size_t max_samples = 2'000'000;
};

StationaryEstimate simulate(const ModelParams& params, const SimulateConfig& config);

struct ExactOptions {
    int max_depth = -1;  // default: the cap C itself
    std::size_t state_limit = 200'000;
    double residual_target = 1e-12;
    long long max_iterations = 400'000;
};

// Stationary law of the loss-truncated chain (arrivals blocked at total = C
// and past max_depth); brute-force oracle for small n.
class ExactDistribution {
public:
    ExactDistribution(const ModelParams& params, int cap_c, const ExactOptions& opts = {});

    const ModelParams& params() const { return params_; }
    int cap_c() const { return cap_c_; }
    int depth() const { return depth_; }
    std::size_t state_count() const { return states_.size(); }
    double residual_inf() const { return residual_inf_; }
    double blocking_prob() const { return blocking_prob_; }
    const std::vector<std::vector<int>>& states() const { return states_; }
    const std::vector<double>& probs() const { return probs_; }

    double expect(const StateFn& f) const;
    double eq(int i) const;      // E Q_i, 1-based
    double pblock(int k) const;  // P(Q1 = ... = Qk = n)
    double tail_prob(double theta) const;    // P(X2 >= theta)
    double tail_excess(double theta) const;  // E (X2 - theta)+

    // E_pi G f for the same blocked generator the solve used.
    double bar_residual(const StateFn& f) const;

private:
    ModelParams params_;
    int cap_c_ = 0;
    int depth_ = 0;
    std::vector<std::vector<int>> states_;
    std::vector<double> probs_;
    std::vector<std::size_t> row_offset_;
    std::vector<std::pair<int, double>> transitions_;  // (target, rate)
    double residual_inf_ = 0.0;
    double blocking_prob_ = 0.0;
};

struct MomentIdentityReport {
    std::vector<double> discrepancy;  // index i-1: |E Q_i - n lambda P(block_{i-1})|
    std::vector<double> slack;        // CI-based allowance (zero for exact)
    double worst = 0.0;
};

MomentIdentityReport moment_identities_check(const ExactDistribution& dist, int max_i);
MomentIdentityReport moment_identities_check(const StationaryEstimate& est, int max_i);

struct ThmMainMargins {
    double main1_lhs = 0.0, main1_rhs = 0.0, main1_slack = 0.0;
    double tight_lhs = 0.0, tight_rhs = 0.0, tight_slack = 0.0;
    bool main1_holds = false, tight_holds = false;
};

ThmMainMargins thm_main_check(const ExactDistribution& dist, double kappa);
ThmMainMargins thm_main_check(const StationaryEstimate& est, double kappa);

double eq_main2_rhs(const ModelParams& params, double kappa, double kappa_tilde);

struct ThmQ3Margins {
    double eq3 = 0.0, eq3_ci = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool ordering_ok = false;  // E Q_i <= E Q_3 for i > 3
};

ThmQ3Margins thm_q3_check(const ExactDistribution& dist, double kappa, double kappa_tilde);
ThmQ3Margins thm_q3_check(const StationaryEstimate& est, double kappa, double kappa_tilde);

}  // namespace jsqlab
