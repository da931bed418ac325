#include "jsqlab/jsq_ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>

#include "jsqlab/quadrature.hpp"
#include "jsqlab/rng.hpp"
#include "jsqlab/stats.hpp"

namespace jsqlab {

void QueueState::validate(int n) const {
    int prev = n;
    for (int v : q) {
        if (v < 0 || v > prev)
            throw std::invalid_argument("QueueState: levels must be nonincreasing in [0, n]");
        prev = v;
    }
}

double apply_GQ(const ModelParams& params, const StateFn& f, const QueueState& q, int trunc_b) {
    q.validate(params.n);
    const double nl = params.n * params.lambda;
    double fq = f(q);
    double out = 0.0;

    // exactly one arrival term is active: the first non-full level
    int target = 0;
    while (target < trunc_b && q.level(target) == params.n) ++target;
    if (target >= trunc_b)
        throw TruncationOverflow("apply_GQ: arrival target exceeds truncation depth");
    QueueState up = q;
    if (static_cast<std::size_t>(target) >= up.q.size()) up.q.resize(target + 1, 0);
    up.q[target] += 1;
    out += nl * (f(up) - fq);

    for (std::size_t i = 0; i < q.q.size(); ++i) {
        int rate = q.q[i] - q.level(i + 1);
        if (rate <= 0) continue;
        QueueState down = q;
        down.q[i] -= 1;
        while (!down.q.empty() && down.q.back() == 0) down.q.pop_back();
        out += rate * (f(down) - fq);
    }
    return out;
}

StateFn lift(const ModelParams& params, const std::function<double(double, double)>& f2d) {
    const int n = params.n;
    return [n, f2d](const QueueState& q) {
        return f2d((q.level(0) - n) / static_cast<double>(n), q.level(1) / static_cast<double>(n));
    };
}

namespace {

// Split points of [a, b] where the closed-form branch changes along the
// segment p(t); located by bisection on the region id.
template <typename PointAt>
std::vector<double> branch_splits(const JetField& jets, const PointAt& at, double a, double b) {
    std::vector<double> splits;
    const int probes = 8;
    double prev_t = a;
    int prev_id = jets.region_id(at(a));
    for (int i = 1; i <= probes; ++i) {
        double t = a + (b - a) * i / probes;
        int id = jets.region_id(at(t));
        if (id != prev_id) {
            double lo = prev_t, hi = t;
            int lo_id = prev_id;
            while (hi - lo > 1e-14 * std::max(1.0, std::abs(hi))) {
                double m = 0.5 * (lo + hi);
                if (jets.region_id(at(m)) == lo_id)
                    lo = m;
                else
                    hi = m;
            }
            splits.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_id = id;
    }
    return splits;
}

}  // namespace

ExpansionGap expansion_gap_check(const ModelParams& params, const JetField& jets,
                                 const QueueState& q) {
    q.validate(params.n);
    const int n = params.n;
    const double lambda = params.lambda;
    const double nl = n * lambda;
    const double x1 = (q.level(0) - n) / static_cast<double>(n);
    const double x2 = q.level(1) / static_cast<double>(n);
    const int q1 = q.level(0), q2 = q.level(1), q3 = q.level(2);
    const double inv_n = 1.0 / n;
    const double quad_tol = 1e-12;

    StateFn lifted = lift(params, [&](double u1, double u2) {
        return jets.eval(FluidPoint{u1, u2}).f;
    });
    FieldJet jet = jets.eval(FluidPoint{x1, x2});

    ExpansionGap gap;
    gap.lhs = apply_GQ(params, lifted, q, static_cast<int>(q.q.size()) + 2) -
              ((-x1 + x2 - params.b()) * jet.f1 - x2 * jet.f2);

    double rhs = (jet.f2 - jet.f1) * lambda * (q1 == n ? 1.0 : 0.0) -
                 jet.f2 * lambda * (q1 == n && q2 == n ? 1.0 : 0.0);

    auto horiz = [&](double u) { return FluidPoint{u, x2}; };
    auto vert = [&](double u) { return FluidPoint{x1, u}; };

    if (q3 > 0) {
        auto f2_at = [&](double u) { return jets.eval(vert(u)).f2; };
        rhs += q3 * integrate_with_knots(f2_at, x2 - inv_n, x2, quad_tol,
                                         branch_splits(jets, vert, x2 - inv_n, x2));
    }
    if (q1 < n) {
        auto f11w = [&](double u) { return (x1 + inv_n - u) * jets.eval(horiz(u)).f11; };
        rhs += nl * integrate_with_knots(f11w, x1, x1 + inv_n, quad_tol,
                                         branch_splits(jets, horiz, x1, x1 + inv_n));
    }
    if (q1 == n && q2 < n) {
        auto f22w = [&](double u) { return (x2 + inv_n - u) * jets.eval(vert(u)).f22; };
        rhs += nl * integrate_with_knots(f22w, x2, x2 + inv_n, quad_tol,
                                         branch_splits(jets, vert, x2, x2 + inv_n));
    }
    if (q1 > q2) {
        auto f11w = [&](double u) { return (u - (x1 - inv_n)) * jets.eval(horiz(u)).f11; };
        rhs += (q1 - q2) * integrate_with_knots(f11w, x1 - inv_n, x1, quad_tol,
                                                branch_splits(jets, horiz, x1 - inv_n, x1));
    }
    if (q2 > 0) {
        auto f22w = [&](double u) { return (u - (x2 - inv_n)) * jets.eval(vert(u)).f22; };
        rhs += q2 * integrate_with_knots(f22w, x2 - inv_n, x2, quad_tol,
                                         branch_splits(jets, vert, x2 - inv_n, x2));
    }
    gap.rhs = rhs;
    return gap;
}

const TailStat& StationaryEstimate::tail(double theta) const {
    for (const auto& t : tails)
        if (std::abs(t.theta - theta) <= 1e-14) return t;
    throw std::invalid_argument("StationaryEstimate: no tail stat recorded for requested theta");
}

StationaryEstimate simulate(const ModelParams& params, const SimulateConfig& config) {
    if (!(config.horizon > config.burn_in && config.burn_in > 0.0))
        throw std::invalid_argument("simulate: horizon > burn_in > 0 required");
    if (config.trunc_b < 3) throw std::invalid_argument("simulate: trunc_b >= 3 required");
    if (config.batch_count < 2) throw std::invalid_argument("simulate: batch_count >= 2 required");

    const int n = params.n;
    const int B = config.trunc_b;
    const double nl = n * params.lambda;
    const double measure_len = config.horizon - config.burn_in;
    const double batch_len = measure_len / config.batch_count;
    const std::size_t n_tails = config.tail_thetas.size();

    // per-batch time integrals: Q_i, block indicators, tail prob/excess
    const std::size_t stats_per_batch = 2 * B + 2 * n_tails;
    std::vector<double> acc(config.batch_count * stats_per_batch, 0.0);

    std::vector<int> q(B, 0);
    std::vector<double> cur(stats_per_batch, 0.0);  // stat values of current state
    auto refresh_stats = [&]() {
        int prefix_full = 0;
        while (prefix_full < B && q[prefix_full] == n) ++prefix_full;
        for (int i = 0; i < B; ++i) {
            cur[i] = q[i];
            cur[B + i] = (i < prefix_full) ? 1.0 : 0.0;
        }
        double x2 = q[1] / static_cast<double>(n);
        for (std::size_t t = 0; t < n_tails; ++t) {
            double theta = config.tail_thetas[t];
            cur[2 * B + 2 * t] = (x2 >= theta) ? 1.0 : 0.0;
            cur[2 * B + 2 * t + 1] = std::max(x2 - theta, 0.0);
        }
    };
    refresh_stats();

    auto accumulate = [&](double a, double b2) {
        a = std::max(a, config.burn_in);
        b2 = std::min(b2, config.horizon);
        while (a < b2) {
            int batch = std::min(config.batch_count - 1,
                                 static_cast<int>((a - config.burn_in) / batch_len));
            double batch_end = config.burn_in + (batch + 1) * batch_len;
            double seg = std::min(b2, batch_end) - a;
            double* dst = acc.data() + batch * stats_per_batch;
            for (std::size_t s = 0; s < stats_per_batch; ++s) dst[s] += cur[s] * seg;
            a += seg;
        }
    };

    StationaryEstimate est;
    est.n = n;
    est.beta = params.beta;
    est.lambda = params.lambda;
    est.horizon = config.horizon;
    est.burn_in = config.burn_in;
    est.seed = config.seed;
    est.trunc_b = B;
    est.batch_count = config.batch_count;

    Rng rng(config.seed);
    double t = 0.0;
    double next_sample =
        config.sample_dt > 0.0 ? config.burn_in : std::numeric_limits<double>::infinity();
    const double sn = params.sqrt_n();

    while (t < config.horizon) {
        double rate = nl + q[0];
        double dt = rng.exponential(rate);
        double t_next = t + dt;
        accumulate(t, std::min(t_next, config.horizon));
        while (next_sample <= t_next && next_sample < config.horizon &&
               est.samples.size() < config.max_samples) {
            est.samples.emplace_back((q[0] - n) / sn, q[1] / sn);
            next_sample += config.sample_dt;
        }
        t = t_next;
        if (t >= config.horizon) break;

        if (rng.uniform() * rate < nl) {
            if (t >= config.burn_in) ++est.arrival_count;
            int target = 0;
            while (target < B && q[target] == n) ++target;
            if (target < B) {
                q[target] += 1;
            } else if (t >= config.burn_in) {
                ++est.overflow_count;
            }
        } else {
            double v = rng.uniform() * q[0];
            double c = 0.0;
            for (int i = 0; i < B; ++i) {
                int next = (i + 1 < B) ? q[i + 1] : 0;
                c += q[i] - next;
                if (v < c) {
                    q[i] -= 1;
                    break;
                }
            }
        }
        refresh_stats();
    }

    auto finalize = [&](std::size_t offset) {
        std::vector<double> batch_means(config.batch_count);
        for (int b2 = 0; b2 < config.batch_count; ++b2)
            batch_means[b2] = acc[b2 * stats_per_batch + offset] / batch_len;
        return batch_means_ci(batch_means);
    };
    est.eq.resize(B);
    est.eq_ci.resize(B);
    est.pblock.resize(B);
    est.pblock_ci.resize(B);
    for (int i = 0; i < B; ++i) {
        MeanCI m = finalize(i);
        est.eq[i] = m.mean;
        est.eq_ci[i] = m.half_width;
        MeanCI p = finalize(B + i);
        est.pblock[i] = p.mean;
        est.pblock_ci[i] = p.half_width;
    }
    for (std::size_t t2 = 0; t2 < n_tails; ++t2) {
        TailStat ts;
        ts.theta = config.tail_thetas[t2];
        MeanCI p = finalize(2 * B + 2 * t2);
        ts.prob_ge = p.mean;
        ts.prob_ci = p.half_width;
        MeanCI e = finalize(2 * B + 2 * t2 + 1);
        ts.excess_mean = e.mean;
        ts.excess_ci = e.half_width;
        est.tails.push_back(ts);
    }
    return est;
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace

ExactDistribution::ExactDistribution(const ModelParams& params, int cap_c,
                                     const ExactOptions& opts)
    : params_(params), cap_c_(cap_c) {
    if (cap_c < 1) throw std::invalid_argument("ExactDistribution: cap_c >= 1 required");
    depth_ = opts.max_depth > 0 ? std::min(opts.max_depth, cap_c) : cap_c;

    // enumerate nonincreasing sequences bounded by n, depth <= depth_, sum <= C
    std::unordered_map<std::vector<int>, int, VecHash> index;
    std::vector<int> stack;
    std::function<void(int, int)> emit = [&](int maxv, int budget) {
        if (states_.size() > opts.state_limit)
            throw StateSpaceTooLarge("ExactDistribution: state count exceeds limit (" +
                                     std::to_string(opts.state_limit) + ")");
        index.emplace(stack, static_cast<int>(states_.size()));
        states_.push_back(stack);
        if (static_cast<int>(stack.size()) >= depth_) return;
        for (int v = std::min(maxv, budget); v >= 1; --v) {
            stack.push_back(v);
            emit(v, budget - v);
            stack.pop_back();
        }
    };
    emit(params.n, cap_c);

    const double nl = params.n * params.lambda;
    const double uniform_rate = nl + params.n;
    row_offset_.assign(states_.size() + 1, 0);
    std::vector<bool> blocked(states_.size(), false);

    auto arrival_target = [&](const std::vector<int>& q) {
        int i = 0;
        while (i < static_cast<int>(q.size()) && q[i] == params.n) ++i;
        return i;
    };

    for (std::size_t s = 0; s < states_.size(); ++s) {
        const auto& q = states_[s];
        int total = 0;
        for (int v : q) total += v;
        int tgt = arrival_target(q);
        blocked[s] = (total >= cap_c_) || (tgt >= depth_);
        std::size_t count = blocked[s] ? 0 : 1;
        for (std::size_t i = 0; i < q.size(); ++i) {
            int next = (i + 1 < q.size()) ? q[i + 1] : 0;
            if (q[i] - next > 0) ++count;
        }
        row_offset_[s + 1] = row_offset_[s] + count;
    }
    transitions_.resize(row_offset_.back());
    for (std::size_t s = 0; s < states_.size(); ++s) {
        const auto& q = states_[s];
        std::size_t pos = row_offset_[s];
        if (!blocked[s]) {
            std::vector<int> up = q;
            int tgt = arrival_target(q);
            if (tgt == static_cast<int>(up.size()))
                up.push_back(1);
            else
                up[tgt] += 1;
            transitions_[pos++] = {index.at(up), nl};
        }
        for (std::size_t i = 0; i < q.size(); ++i) {
            int next = (i + 1 < q.size()) ? q[i + 1] : 0;
            int rate = q[i] - next;
            if (rate <= 0) continue;
            std::vector<int> down = q;
            down[i] -= 1;
            while (!down.empty() && down.back() == 0) down.pop_back();
            transitions_[pos++] = {index.at(down), static_cast<double>(rate)};
        }
    }

    const std::size_t N = states_.size();
    probs_.assign(N, 1.0 / N);

    auto compute_residual = [&](const std::vector<double>& pi) {
        std::vector<double> flow(N, 0.0);
        for (std::size_t s = 0; s < N; ++s) {
            double out = 0.0;
            for (std::size_t k = row_offset_[s]; k < row_offset_[s + 1]; ++k) {
                flow[transitions_[k].first] += pi[s] * transitions_[k].second;
                out += transitions_[k].second;
            }
            flow[s] -= pi[s] * out;
        }
        double r = 0.0;
        for (double v : flow) r = std::max(r, std::abs(v));
        return r;
    };

    if (N <= 2000) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
        for (std::size_t s = 0; s < N; ++s) {
            double out = 0.0;
            for (std::size_t k = row_offset_[s]; k < row_offset_[s + 1]; ++k) {
                A(transitions_[k].first, s) += transitions_[k].second;
                out += transitions_[k].second;
            }
            A(s, s) -= out;
        }
        A.row(N - 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
        rhs(N - 1) = 1.0;
        Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
        double sum = 0.0;
        for (std::size_t s = 0; s < N; ++s) {
            probs_[s] = std::max(pi(s), 0.0);
            sum += probs_[s];
        }
        for (double& p : probs_) p /= sum;
        residual_inf_ = compute_residual(probs_);
    } else {
        // uniformized power iteration with periodic Aitken extrapolation of
        // the dominant error mode
        std::vector<double> next(N), prev_diff, diff(N);
        long long it = 0;
        double prev_diff_norm = 0.0;
        while (true) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t s = 0; s < N; ++s) {
                double out = 0.0;
                for (std::size_t k = row_offset_[s]; k < row_offset_[s + 1]; ++k) {
                    next[transitions_[k].first] += probs_[s] * transitions_[k].second / uniform_rate;
                    out += transitions_[k].second;
                }
                next[s] += probs_[s] * (1.0 - out / uniform_rate);
            }
            double diff_inf = 0.0, diff_norm = 0.0;
            for (std::size_t s = 0; s < N; ++s) {
                diff[s] = next[s] - probs_[s];
                diff_inf = std::max(diff_inf, std::abs(diff[s]));
                diff_norm += diff[s] * diff[s];
            }
            diff_norm = std::sqrt(diff_norm);
            probs_.swap(next);
            ++it;
            if (diff_inf * uniform_rate <= opts.residual_target) break;
            if (it >= opts.max_iterations)
                throw ConvergenceFailure("ExactDistribution: power iteration did not converge");
            if (it % 60 == 0) {
                if (prev_diff_norm > 0.0 && diff_norm > 0.0) {
                    double rho = diff_norm / prev_diff_norm;
                    rho = std::pow(rho, 1.0 / 60.0);
                    if (rho < 1.0 && rho > 0.2) {
                        double gain = rho / (1.0 - rho);
                        double sum = 0.0;
                        for (std::size_t s = 0; s < N; ++s) {
                            probs_[s] = std::max(0.0, probs_[s] + gain * diff[s]);
                            sum += probs_[s];
                        }
                        for (double& p : probs_) p /= sum;
                    }
                }
                prev_diff_norm = diff_norm;
            }
        }
        double sum = 0.0;
        for (double p : probs_) sum += p;
        for (double& p : probs_) p /= sum;
        residual_inf_ = compute_residual(probs_);
    }

    if (residual_inf_ > 1e-10)
        throw ConvergenceFailure("ExactDistribution: stationary residual " +
                                 std::to_string(residual_inf_) + " exceeds 1e-10");
    blocking_prob_ = 0.0;
    for (std::size_t s = 0; s < N; ++s)
        if (blocked[s]) blocking_prob_ += probs_[s];
}

double ExactDistribution::expect(const StateFn& f) const {
    double out = 0.0;
    QueueState qs;
    for (std::size_t s = 0; s < states_.size(); ++s) {
        qs.q = states_[s];
        out += probs_[s] * f(qs);
    }
    return out;
}

double ExactDistribution::eq(int i) const {
    if (i < 1) throw std::invalid_argument("eq: i >= 1 required");
    double out = 0.0;
    for (std::size_t s = 0; s < states_.size(); ++s)
        out += probs_[s] * (static_cast<int>(states_[s].size()) >= i ? states_[s][i - 1] : 0);
    return out;
}

double ExactDistribution::pblock(int k) const {
    if (k < 1) throw std::invalid_argument("pblock: k >= 1 required");
    double out = 0.0;
    for (std::size_t s = 0; s < states_.size(); ++s) {
        const auto& q = states_[s];
        bool full = static_cast<int>(q.size()) >= k;
        for (int i = 0; full && i < k; ++i) full = q[i] == params_.n;
        if (full) out += probs_[s];
    }
    return out;
}

double ExactDistribution::tail_prob(double theta) const {
    double out = 0.0;
    for (std::size_t s = 0; s < states_.size(); ++s) {
        double x2 = (states_[s].size() >= 2 ? states_[s][1] : 0) / static_cast<double>(params_.n);
        if (x2 >= theta) out += probs_[s];
    }
    return out;
}

double ExactDistribution::tail_excess(double theta) const {
    double out = 0.0;
    for (std::size_t s = 0; s < states_.size(); ++s) {
        double x2 = (states_[s].size() >= 2 ? states_[s][1] : 0) / static_cast<double>(params_.n);
        out += probs_[s] * std::max(x2 - theta, 0.0);
    }
    return out;
}

double ExactDistribution::bar_residual(const StateFn& f) const {
    double out = 0.0;
    QueueState from, to;
    for (std::size_t s = 0; s < states_.size(); ++s) {
        from.q = states_[s];
        double fs = f(from);
        for (std::size_t k = row_offset_[s]; k < row_offset_[s + 1]; ++k) {
            to.q = states_[transitions_[k].first];
            out += probs_[s] * transitions_[k].second * (f(to) - fs);
        }
    }
    return out;
}

MomentIdentityReport moment_identities_check(const ExactDistribution& dist, int max_i) {
    MomentIdentityReport rep;
    const ModelParams& p = dist.params();
    double nl = p.n * p.lambda;
    for (int i = 1; i <= max_i; ++i) {
        double target = (i == 1) ? nl : nl * dist.pblock(i - 1);
        rep.discrepancy.push_back(std::abs(dist.eq(i) - target));
        rep.slack.push_back(0.0);
    }
    for (double d : rep.discrepancy) rep.worst = std::max(rep.worst, d);
    return rep;
}

MomentIdentityReport moment_identities_check(const StationaryEstimate& est, int max_i) {
    MomentIdentityReport rep;
    double nl = est.n * est.lambda;
    for (int i = 1; i <= max_i && i <= static_cast<int>(est.eq.size()); ++i) {
        double target = (i == 1) ? nl : nl * est.pblock[i - 2];
        double target_ci = (i == 1) ? 0.0 : nl * est.pblock_ci[i - 2];
        rep.discrepancy.push_back(std::abs(est.eq[i - 1] - target));
        rep.slack.push_back(3.0 * (est.eq_ci[i - 1] + target_ci));
    }
    for (double d : rep.discrepancy) rep.worst = std::max(rep.worst, d);
    return rep;
}

namespace {

double main1_coef(double beta, double kappa, double sqrt_n) {
    return (12.0 + 6.0 * kappa / (kappa - beta)) / (beta * sqrt_n);
}

double tight_rhs_value(double beta, double kappa) {
    return 2.0 * kappa + (12.0 + 6.0 * kappa / (kappa - beta)) / beta;
}

}  // namespace

ThmMainMargins thm_main_check(const ExactDistribution& dist, double kappa) {
    const ModelParams& p = dist.params();
    if (kappa <= p.beta) throw std::invalid_argument("thm_main_check: kappa > beta required");
    double rt = p.sqrt_n();
    ThmMainMargins m;
    m.main1_lhs = dist.tail_excess(kappa / rt);
    m.main1_rhs = main1_coef(p.beta, kappa, rt) * dist.tail_prob(kappa / rt - 1.0 / p.n);
    m.tight_lhs = dist.eq(2) / rt;
    m.tight_rhs = tight_rhs_value(p.beta, kappa);
    m.main1_holds = m.main1_lhs <= m.main1_rhs + 1e-12;
    m.tight_holds = m.tight_lhs <= m.tight_rhs + 1e-12;
    return m;
}

ThmMainMargins thm_main_check(const StationaryEstimate& est, double kappa) {
    if (kappa <= est.beta) throw std::invalid_argument("thm_main_check: kappa > beta required");
    double rt = std::sqrt(static_cast<double>(est.n));
    const TailStat& at_k = est.tail(kappa / rt);
    const TailStat& at_km = est.tail(kappa / rt - 1.0 / est.n);
    double coef = main1_coef(est.beta, kappa, rt);
    ThmMainMargins m;
    m.main1_lhs = at_k.excess_mean;
    m.main1_rhs = coef * at_km.prob_ge;
    m.main1_slack = 3.0 * (at_k.excess_ci + coef * at_km.prob_ci);
    m.tight_lhs = est.eq[1] / rt;
    m.tight_rhs = tight_rhs_value(est.beta, kappa);
    m.tight_slack = 3.0 * est.eq_ci[1] / rt;
    m.main1_holds = m.main1_lhs <= m.main1_rhs + m.main1_slack;
    m.tight_holds = m.tight_lhs + m.tight_slack <= m.tight_rhs;
    return m;
}

double eq_main2_rhs(const ModelParams& params, double kappa, double kappa_tilde) {
    if (kappa <= params.beta) throw std::invalid_argument("eq_main2_rhs: kappa > beta required");
    double lo = std::max(params.beta / params.sqrt_n(), 1.0 / params.n);
    if (!(kappa_tilde > lo && kappa_tilde < 1.0))
        throw std::invalid_argument("eq_main2_rhs: kappa_tilde outside its window");
    double beta = params.beta;
    return 1.0 / (beta * (1.0 - kappa_tilde)) *
           (12.0 + 6.0 * kappa_tilde / (kappa_tilde - beta / params.sqrt_n())) *
           (1.0 / (kappa_tilde - 1.0 / params.n)) * tight_rhs_value(beta, kappa);
}

namespace {

template <typename EqAt>
bool ordering_holds(const EqAt& eq_at, int max_i, double tol) {
    for (int i = 4; i <= max_i; ++i)
        if (eq_at(i) > eq_at(3) + tol) return false;
    return true;
}

}  // namespace

ThmQ3Margins thm_q3_check(const ExactDistribution& dist, double kappa, double kappa_tilde) {
    ThmQ3Margins m;
    m.eq3 = dist.eq(3);
    m.rhs = eq_main2_rhs(dist.params(), kappa, kappa_tilde);
    m.holds = m.eq3 <= m.rhs + 1e-12;
    m.ordering_ok =
        ordering_holds([&](int i) { return dist.eq(i); }, std::min(8, dist.depth()), 1e-12);
    return m;
}

ThmQ3Margins thm_q3_check(const StationaryEstimate& est, double kappa, double kappa_tilde) {
    ModelParams p(est.n, est.beta);
    ThmQ3Margins m;
    m.eq3 = est.eq[2];
    m.eq3_ci = est.eq_ci[2];
    m.rhs = eq_main2_rhs(p, kappa, kappa_tilde);
    m.holds = m.eq3 <= m.rhs + 3.0 * m.eq3_ci;
    m.ordering_ok = ordering_holds(
        [&](int i) { return est.eq[i - 1] - 3.0 * est.eq_ci[i - 1]; }, est.trunc_b,
        3.0 * est.eq_ci[2]);
    return m;
}

}  // namespace jsqlab
