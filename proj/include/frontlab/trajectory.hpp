#pragma once

// Trajectory drivers and instrumentation: per-generation extremes, the
// pathwise diameter bound, velocity estimation from the min/max sandwich,
// the good-index lemma, and the exponential moment check.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/population.hpp"
#include "frontlab/rng.hpp"
#include "frontlab/step_distribution.hpp"
#include "frontlab/theory.hpp"

namespace frontlab {

/// u_N = ceil(log N / log 2) + 1, the diameter-bound window length.
inline std::size_t u_of(std::size_t n_particles) {
    std::size_t u = 1;  // ceil(log2 N)
    std::size_t pow2 = 1;
    std::size_t ceil_log2 = 0;
    while (pow2 < n_particles) {
        pow2 *= 2;
        ++ceil_log2;
    }
    u = ceil_log2 + 1;
    return u;
}

struct InstrumentationFlags {
    bool step_extremes = false;  // per-generation min/max of the 2N raw steps
    bool full_step_log = false;  // every raw step (small runs only)
};

/// Per-generation records of one run.  Entry g corresponds to X_g; step
/// entries at g >= 1 describe the branching that produced X_g.
struct TrajectoryStats {
    std::size_t n_particles = 0;
    std::vector<double> gen_max;
    std::vector<double> gen_min;
    std::vector<double> step_min;  // present iff instrumented
    std::vector<double> step_max;
    std::vector<std::vector<double>> step_log;  // present iff full logging

    std::size_t generations() const { return gen_max.empty() ? 0 : gen_max.size() - 1; }
    double diameter_at(std::size_t g) const { return gen_max[g] - gen_min[g]; }
};

// Positions are re-centered on this cadence during long runs; the subtracted
// drift is carried in an offset accumulator so reported extremes are exact.
inline constexpr std::uint64_t kRecenterInterval = 1000000;

/// Advances a population by `gens` steps without per-generation recording.
/// Returns the accumulated re-centering offset delta.
inline double advance(Population& pop, const StepDistribution& dist, std::uint64_t gens,
                      RngStream& rng, StepWorkspace& ws, double offset = 0.0) {
    for (std::uint64_t g = 1; g <= gens; ++g) {
        branch_select_step(pop, dist, rng, ws);
        if (g % kRecenterInterval == 0) {
            const double m = pop.min();
            pop.shift(-m);
            offset += m;
        }
    }
    return offset;
}

/// Runs n generations from pop0 and records per-generation extremes (and
/// step extremes / full step logs when instrumented).
inline TrajectoryStats run(const Population& pop0, const StepDistribution& dist, std::size_t n,
                           RngStream& rng, InstrumentationFlags flags = {}) {
    TrajectoryStats stats;
    stats.n_particles = pop0.size();
    stats.gen_max.reserve(n + 1);
    stats.gen_min.reserve(n + 1);
    Population pop = pop0;
    StepWorkspace ws;
    double offset = 0.0;

    stats.gen_max.push_back(pop.max());
    stats.gen_min.push_back(pop.min());
    if (flags.step_extremes) {
        stats.step_min.push_back(0.0);  // placeholder for generation 0
        stats.step_max.push_back(0.0);
    }
    if (flags.full_step_log) stats.step_log.push_back({});

    std::vector<double> raw;
    for (std::size_t g = 1; g <= n; ++g) {
        StepExtremes ext;
        if (flags.full_step_log) {
            raw.resize(2 * pop.size());
            for (std::size_t i = 0; i < pop.size(); ++i) {
                raw[2 * i] = dist.sample_one(rng);
                raw[2 * i + 1] = dist.sample_one(rng);
            }
            ws.children.resize(2 * pop.size());
            for (std::size_t i = 0; i < pop.size(); ++i) {
                ws.children[2 * i] = pop.positions[i] + raw[2 * i];
                ws.children[2 * i + 1] = pop.positions[i] + raw[2 * i + 1];
                ext.min_step = std::min(ext.min_step, std::min(raw[2 * i], raw[2 * i + 1]));
                ext.max_step = std::max(ext.max_step, std::max(raw[2 * i], raw[2 * i + 1]));
            }
            detail::select_rightmost(ws.children, pop, pop.size());
            stats.step_log.push_back(raw);
        } else {
            ext = branch_select_step(pop, dist, rng, ws);
        }
        stats.gen_max.push_back(pop.max() + offset);
        stats.gen_min.push_back(pop.min() + offset);
        if (flags.step_extremes) {
            stats.step_min.push_back(ext.min_step);
            stats.step_max.push_back(ext.max_step);
        }
        if (g % kRecenterInterval == 0) {
            const double m = pop.min();
            pop.shift(-m);
            offset += m;
        }
    }
    return stats;
}

/// Pathwise Prop-3.1 check: for every n >= u_N, the diameter of X_n is at
/// most u_N times the spread of the 2N*u_N raw steps of the last u_N
/// generations.  Throws MissingStepLog without step instrumentation.
inline bool check_diameter_bound(const TrajectoryStats& stats, std::size_t n_particles) {
    if (stats.step_min.size() != stats.gen_max.size())
        throw MissingStepLog("diameter check requires step-extreme instrumentation");
    const std::size_t u = u_of(n_particles);
    const std::size_t gens = stats.generations();
    for (std::size_t n = u; n <= gens; ++n) {
        double wmin = stats.step_min[n];
        double wmax = stats.step_max[n];
        for (std::size_t g = n + 1 - u; g <= n; ++g) {
            wmin = std::min(wmin, stats.step_min[g]);
            wmax = std::max(wmax, stats.step_max[g]);
        }
        const double bound = static_cast<double>(u) * (wmax - wmin);
        const double slack = 1e-9 * std::max(1.0, bound);
        if (stats.diameter_at(n) > bound + slack) return false;
    }
    return true;
}

struct VelocityEstimate {
    std::size_t n_particles = 0;
    std::uint64_t gens = 0;  // measurement window length (post burn-in)
    std::uint64_t burn_in = 0;
    std::size_t replicas = 0;
    double v_upper = 0.0;  // mean over replicas of (max X_{burn+n} - max X_burn)/n
    double v_lower = 0.0;  // same with min
    double v_point = 0.0;  // midpoint of the sandwich
    double std_err = 0.0;  // standard error of the midpoint
    double se_upper = 0.0;
    double se_lower = 0.0;

    double combined_se() const { return std::sqrt(se_upper * se_upper + se_lower * se_lower); }
};

/// Velocity from R independent replicas.  Replicas own disjoint rng streams
/// and may run in parallel; aggregation is an ordered reduction, so the
/// result does not depend on thread count.
inline VelocityEstimate estimate_velocity(const StepDistribution& dist, std::size_t n_particles,
                                          std::uint64_t gens, std::uint64_t burn_in,
                                          std::size_t replicas, std::uint64_t seed,
                                          std::uint64_t stream_tag = 0x76656c6f) {
    VelocityEstimate est;
    est.n_particles = n_particles;
    est.gens = gens;
    est.burn_in = burn_in;
    est.replicas = replicas;

    std::vector<double> vu(replicas), vl(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, derive_stream_id(stream_tag, r));
        Population pop = Population::at_zero(n_particles);
        StepWorkspace ws;
        double offset = advance(pop, dist, burn_in, rng, ws);
        const double max0 = pop.max() + offset;
        const double min0 = pop.min() + offset;
        offset = advance(pop, dist, gens, rng, ws, offset);
        vu[r] = (pop.max() + offset - max0) / static_cast<double>(gens);
        vl[r] = (pop.min() + offset - min0) / static_cast<double>(gens);
    });

    auto mean_se = [](const std::vector<double>& xs, double& mean, double& se) {
        const double n = static_cast<double>(xs.size());
        mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    };
    mean_se(vu, est.v_upper, est.se_upper);
    mean_se(vl, est.v_lower, est.se_lower);
    est.v_point = 0.5 * (est.v_upper + est.v_lower);
    est.std_err = 0.5 * est.combined_se();
    return est;
}

/// I = {i <= n-m : x_j - x_i >= v1 (j-i) for all j in [i, i+m]}.
/// Throws StepBoundViolated if any increment exceeds K.
inline std::vector<std::size_t> good_indices(const std::vector<double>& seq, double v1,
                                             std::size_t m, double K) {
    const std::size_t n = seq.size() - 1;  // seq holds x_0..x_n
    for (std::size_t i = 0; i < n; ++i)
        if (seq[i + 1] - seq[i] > K)
            throw StepBoundViolated("increment exceeds K at index " + std::to_string(i));
    std::vector<std::size_t> idx;
    if (m > n) return idx;
    for (std::size_t i = 0; i + m <= n; ++i) {
        bool good = true;
        for (std::size_t j = i; j <= i + m; ++j) {
            if (seq[j] - seq[i] < v1 * static_cast<double>(j - i)) {
                good = false;
                break;
            }
        }
        if (good) idx.push_back(i);
    }
    return idx;
}

/// The Lemma-5.1 cardinality floor: whenever x_n >= v2 n (and increments are
/// bounded by K), #I >= (v2-v1)/(K-v1) * n/m - K/(K-v1).
inline double good_indices_cardinality_floor(double v1, double v2, double K, std::size_t n,
                                             std::size_t m) {
    return (v2 - v1) / (K - v1) * (static_cast<double>(n) / static_cast<double>(m)) -
           K / (K - v1);
}

struct ExpMomentEstimate {
    double estimate = 1.0;
    double std_err = 0.0;
};

/// Monte Carlo estimate of E exp(t* (max X_N^n - v(p) n)), which the paper
/// bounds by N.
inline ExpMomentEstimate exp_moment_check(const StepDistribution& dist,
                                          const TheoryConstants& tc, std::size_t n_particles,
                                          std::uint64_t gens, std::size_t replicas,
                                          std::uint64_t seed,
                                          std::uint64_t stream_tag = 0x65786d6f) {
    std::vector<double> vals(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, derive_stream_id(stream_tag, r));
        Population pop = Population::at_zero(n_particles);
        StepWorkspace ws;
        const double offset = advance(pop, dist, gens, rng, ws);
        vals[r] = std::exp(tc.t_star * (pop.max() + offset - tc.v_inf * static_cast<double>(gens)));
    });
    ExpMomentEstimate out;
    const double n = static_cast<double>(replicas);
    out.estimate = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : vals) ss += (v - out.estimate) * (v - out.estimate);
    out.std_err = replicas > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return out;
}

}  // namespace frontlab
