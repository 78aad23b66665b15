#pragma once

// Survival of the binary branching random walk killed below the line of
// slope v(p) - eps: direct front simulation, an exact DP oracle for lattice
// steps, the tilted first-moment tube estimator, and Galton-Watson helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/parallel.hpp"
#include "frontlab/rng.hpp"
#include "frontlab/step_distribution.hpp"
#include "frontlab/theory.hpp"

namespace frontlab {

/// Killing line and tube geometry for one survival experiment.
struct BarrierSpec {
    double speed = 0.0;   // killing slope, v(p) - eps
    double eps = 0.0;     // velocity deficit
    std::uint64_t horizon = 0;  // m
    double band = 0.0;    // upper tube wall offset (the lambda eps^{-1/2} wall)

    static BarrierSpec from_constants(const TheoryConstants& tc, double eps,
                                      std::uint64_t horizon, double band = 0.0) {
        BarrierSpec b;
        b.speed = tc.v_inf - eps;
        b.eps = eps;
        b.horizon = horizon;
        b.band = band > 0.0 ? band : 4.0 / std::sqrt(eps);
        return b;
    }
};

enum class FrontOutcome { Alive, Dead, Capped };

/// Reusable front buffers.
struct FrontWorkspace {
    std::vector<double> cur, next;
};

/// Simulates one killed front: generation i keeps the children whose whole
/// ancestry stayed at or above speed*j for j <= i.  Dead if the front
/// empties before the horizon, Capped if it outgrows `cap`.
inline FrontOutcome survive_once(const StepDistribution& dist, const BarrierSpec& barrier,
                                 std::uint64_t cap, RngStream& rng, FrontWorkspace& ws) {
    if (barrier.horizon == 0) return FrontOutcome::Alive;  // rho(0, .) = 1 by convention
    ws.cur.assign(1, 0.0);
    for (std::uint64_t g = 1; g <= barrier.horizon; ++g) {
        const double line = barrier.speed * static_cast<double>(g);
        ws.next.clear();
        for (double x : ws.cur) {
            const double c1 = x + dist.sample_one(rng);
            const double c2 = x + dist.sample_one(rng);
            if (c1 >= line) ws.next.push_back(c1);
            if (c2 >= line) ws.next.push_back(c2);
        }
        if (ws.next.empty()) return FrontOutcome::Dead;
        if (ws.next.size() > cap) return FrontOutcome::Capped;
        std::swap(ws.cur, ws.next);
    }
    return FrontOutcome::Alive;
}

enum class SurvivalMethod { Direct, TiltedFirstMoment, ExactDp };

struct SurvivalEstimate {
    double rho_hat = 0.0;
    double ci_halfwidth = 0.0;  // Wilson 95%
    double rho_lower = 0.0;     // capped trials counted dead
    double rho_upper = 0.0;     // capped trials counted alive
    double capped_fraction = 0.0;
    std::size_t replicas = 0;
    SurvivalMethod method = SurvivalMethod::Direct;

    double std_err() const {
        if (replicas == 0) return 0.0;
        return std::sqrt(rho_hat * (1.0 - rho_hat) / static_cast<double>(replicas));
    }
};

namespace detail {

inline double wilson_halfwidth(double p_hat, std::size_t n) {
    if (n == 0) return 0.0;
    const double z = 1.959963984540054;  // 95%
    const double nn = static_cast<double>(n);
    const double denom = 1.0 + z * z / nn;
    return z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z * z / (4.0 * nn * nn)) / denom;
}

}  // namespace detail

/// Monte Carlo rho(m, eps) over independent killed fronts with slope
/// v_inf - eps.  Capped trials are bracketed: alive for rho_upper (and the
/// point estimate), dead for rho_lower.
inline SurvivalEstimate estimate_rho(const StepDistribution& dist, const TheoryConstants& tc,
                                     double eps, std::uint64_t horizon, std::size_t replicas,
                                     std::uint64_t cap, std::uint64_t seed,
                                     std::uint64_t stream_tag = 0x73757276) {
    const BarrierSpec barrier = BarrierSpec::from_constants(tc, eps, horizon);
    std::vector<std::uint8_t> outcome(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, derive_stream_id(stream_tag, r));
        FrontWorkspace ws;
        outcome[r] = static_cast<std::uint8_t>(survive_once(dist, barrier, cap, rng, ws));
    });
    std::size_t alive = 0, capped = 0;
    for (std::uint8_t o : outcome) {
        if (o == static_cast<std::uint8_t>(FrontOutcome::Alive)) ++alive;
        if (o == static_cast<std::uint8_t>(FrontOutcome::Capped)) ++capped;
    }
    SurvivalEstimate est;
    est.replicas = replicas;
    est.method = SurvivalMethod::Direct;
    const double n = static_cast<double>(replicas);
    est.rho_lower = static_cast<double>(alive) / n;
    est.rho_upper = static_cast<double>(alive + capped) / n;
    est.rho_hat = est.rho_upper;
    est.capped_fraction = static_cast<double>(capped) / n;
    est.ci_halfwidth = detail::wilson_halfwidth(est.rho_hat, replicas);
    return est;
}

/// Exact rho(m, eps) for Bernoulli steps (integer lattice) by backward
/// recursion over (generation, position).  Oracle for the Monte Carlo path.
inline double exact_rho_dp(const StepDistribution& dist, double speed, std::uint64_t horizon) {
    if (dist.kind() != DistKind::Bernoulli)
        throw UnsupportedDistribution("exact_rho_dp supports Bernoulli steps only");
    if (horizon == 0) return 1.0;
    const double alpha = dist.param1();
    const std::size_t m = static_cast<std::size_t>(horizon);
    // q[g][x] = P(vertex at generation g, position x is good to depth m-g)
    std::vector<double> qnext(m + 1, 1.0);  // generation m
    std::vector<double> q;
    for (std::size_t g = m; g-- > 0;) {
        q.assign(g + 1, 0.0);
        const double line = speed * static_cast<double>(g + 1);
        for (std::size_t x = 0; x <= g; ++x) {
            double w = 0.0;
            if (static_cast<double>(x + 1) >= line) w += alpha * qnext[x + 1];
            if (static_cast<double>(x) >= line) w += (1.0 - alpha) * qnext[x];
            q[x] = 1.0 - (1.0 - w) * (1.0 - w);
        }
        std::swap(q, qnext);
    }
    return qnext[0];
}

inline SurvivalEstimate exact_rho_dp(const StepDistribution& dist, const TheoryConstants& tc,
                                     double eps, std::uint64_t horizon) {
    SurvivalEstimate est;
    est.method = SurvivalMethod::ExactDp;
    est.rho_hat = exact_rho_dp(dist, tc.v_inf - eps, horizon);
    est.rho_lower = est.rho_upper = est.rho_hat;
    return est;
}

struct TubeMomentEstimate {
    double mean = 1.0;  // estimate of E(Xi_m)
    double std_err = 0.0;
    std::size_t replicas = 0;
};

/// First-moment tube estimator: E(Xi_m), the expected number of descending
/// paths with (v-eps) i <= S_i <= v i + band for all i <= m, computed as a
/// tilted-measure average of exp(-t* (S_m - v m)) over single random walks
/// with steps from tilt(p, t*).
inline TubeMomentEstimate tilted_first_moment(const StepDistribution& dist,
                                              const TheoryConstants& tc, double eps,
                                              std::uint64_t horizon, double band,
                                              std::size_t replicas, std::uint64_t seed,
                                              std::uint64_t stream_tag = 0x74696c74) {
    TubeMomentEstimate out;
    out.replicas = replicas;
    if (horizon == 0) return out;  // empty product: exactly 1

    const TiltedDistribution tilted = tilt(dist, tc.t_star);
    const double v = tc.v_inf;
    std::vector<double> vals(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, derive_stream_id(stream_tag, r));
        double s = 0.0;
        bool in_tube = true;
        for (std::uint64_t i = 1; i <= horizon; ++i) {
            s += tilted.sample_one(rng);
            const double drift = v * static_cast<double>(i);
            if (s < drift - eps * static_cast<double>(i) || s > drift + band) {
                in_tube = false;
                break;
            }
        }
        vals[r] = in_tube ? std::exp(-tc.t_star * (s - v * static_cast<double>(horizon))) : 0.0;
    });
    const double n = static_cast<double>(replicas);
    out.mean = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : vals) ss += (x - out.mean) * (x - out.mean);
    out.std_err = replicas > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return out;
}

/// Union bound on Q(Delta_m >= 1): each depth contributes at most
/// exp(-t* band), so the total is (m+1) exp(-t* band).  Together with
/// E(Xi_m) this gives the upper half of the survival sandwich.
inline double delta_tail_bound(const TheoryConstants& tc, double band, std::uint64_t horizon) {
    return static_cast<double>(horizon + 1) * std::exp(-tc.t_star * band);
}

/// Lemma-8.2 certificate: for a Galton-Watson offspring law Q with
/// a * Q([a, inf)) >= 2 log 2 for some a >= 1, survival is at least
/// Q([a, inf))/2.  Returns nothing when the condition fails.
inline std::optional<double> gw_survival_lower_bound(double q_a, double a) {
    if (a * q_a >= 2.0 * std::numbers::ln2) return q_a / 2.0;
    return std::nullopt;
}

struct GrowthEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    std::size_t replicas = 0;
};

/// Monte Carlo P(M_n >= phi^n) for the binomial(2, q) Galton-Watson process,
/// exhibiting an empirical (r, phi) pair for the uniform growth lemma.
inline GrowthEstimate gw_growth_probability(double q, double phi, std::uint64_t n,
                                            std::size_t replicas, std::uint64_t seed,
                                            std::uint64_t stream_tag = 0x67726f77) {
    if (!(2.0 * q > 1.0))
        throw SubcriticalOffspring("binomial(2,q) offspring needs 2q > 1, got q=" +
                                   std::to_string(q));
    const double threshold = std::pow(phi, static_cast<double>(n));
    std::vector<std::uint8_t> hit(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, derive_stream_id(stream_tag, r));
        std::uint64_t m = 1;
        for (std::uint64_t k = 0; k < n && m > 0; ++k) {
            std::uint64_t children = 0;
            for (std::uint64_t i = 0; i < 2 * m; ++i)
                if (rng.uniform() < q) ++children;
            m = children;
        }
        hit[r] = static_cast<double>(m) >= threshold ? 1 : 0;
    });
    GrowthEstimate out;
    out.replicas = replicas;
    const double nn = static_cast<double>(replicas);
    const double successes =
        static_cast<double>(std::count(hit.begin(), hit.end(), std::uint8_t{1}));
    out.p_hat = successes / nn;
    out.std_err = std::sqrt(out.p_hat * (1.0 - out.p_hat) / nn);
    return out;
}

}  // namespace frontlab
