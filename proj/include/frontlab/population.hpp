#pragma once

// The N-particle branch/select kernel and its monotone couplings.
//
// A step replaces every particle by two children displaced by independent
// draws from the step law, then keeps the N rightmost of the 2N children.
// Positions are stored unsorted; selection uses one nth_element pass.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/rng.hpp"
#include "frontlab/step_distribution.hpp"

namespace frontlab {

/// Multiset of particle positions (unsorted buffer).
struct Population {
    std::vector<double> positions;

    static Population at_zero(std::size_t n) {
        Population p;
        p.positions.assign(n, 0.0);
        return p;
    }

    std::size_t size() const noexcept { return positions.size(); }

    double max() const {
        double m = -std::numeric_limits<double>::infinity();
        for (double v : positions) m = std::max(m, v);
        return m;
    }
    double min() const {
        double m = std::numeric_limits<double>::infinity();
        for (double v : positions) m = std::min(m, v);
        return m;
    }
    double diameter() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (double v : positions) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    }

    void shift(double delta) {
        for (double& v : positions) v += delta;
    }
};

/// Extremes of the 2N raw steps performed in one branching.
struct StepExtremes {
    double min_step = std::numeric_limits<double>::infinity();
    double max_step = -std::numeric_limits<double>::infinity();
};

/// Reusable child buffer; avoids reallocating 2N doubles per step.
struct StepWorkspace {
    std::vector<double> children;
};

namespace detail {

// Keep the N rightmost of the 2N children.  nth_element gives the exact
// top-N multiset in average linear time; ties at the threshold are resolved
// among equal values, which leaves the kept multiset unique.
inline void select_rightmost(std::vector<double>& children, Population& pop, std::size_t n) {
    std::nth_element(children.begin(), children.begin() + static_cast<std::ptrdiff_t>(n - 1),
                     children.end(), std::greater<double>());
    pop.positions.assign(children.begin(), children.begin() + static_cast<std::ptrdiff_t>(n));
}

}  // namespace detail

/// One branch/select step with freshly drawn noise.  Returns the extremes of
/// the 2N steps (used by the diameter instrumentation).
inline StepExtremes branch_select_step(Population& pop, const StepDistribution& dist,
                                       RngStream& rng, StepWorkspace& ws) {
    const std::size_t n = pop.size();
    ws.children.resize(2 * n);
    StepExtremes ext;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = pop.positions[i];
        const double s1 = dist.sample_one(rng);
        const double s2 = dist.sample_one(rng);
        ws.children[2 * i] = x + s1;
        ws.children[2 * i + 1] = x + s2;
        ext.min_step = std::min(ext.min_step, std::min(s1, s2));
        ext.max_step = std::max(ext.max_step, std::max(s1, s2));
    }
    detail::select_rightmost(ws.children, pop, n);
    return ext;
}

/// Convenience overload with a throwaway workspace.
inline StepExtremes branch_select_step(Population& pop, const StepDistribution& dist,
                                       RngStream& rng) {
    StepWorkspace ws;
    return branch_select_step(pop, dist, rng, ws);
}

/// One branch/select step with rank-attached noise: the population is sorted
/// descending and the particle of rank i receives steps[2i], steps[2i+1].
/// This is the shared-noise device behind the monotone coupling and the
/// subadditive array construction.
inline void branch_select_step_ranked(Population& pop, std::span<const double> steps,
                                      StepWorkspace& ws) {
    const std::size_t n = pop.size();
    std::sort(pop.positions.begin(), pop.positions.end(), std::greater<double>());
    ws.children.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        ws.children[2 * i] = pop.positions[i] + steps[2 * i];
        ws.children[2 * i + 1] = pop.positions[i] + steps[2 * i + 1];
    }
    detail::select_rightmost(ws.children, pop, n);
}

/// mu ≺ nu: size(mu) <= size(nu) and, both sorted descending, the i-th
/// largest of mu is <= the i-th largest of nu for every rank i.
inline bool stochastic_order(const Population& mu, const Population& nu) {
    if (mu.size() > nu.size()) return false;
    std::vector<double> a = mu.positions;
    std::vector<double> b = nu.positions;
    std::sort(a.begin(), a.end(), std::greater<double>());
    std::sort(b.begin(), b.end(), std::greater<double>());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

/// One coupled step of two ordered populations: the same step pair is
/// attached to rank i in both, so the outputs stay ordered pathwise.
inline std::pair<Population, Population> coupled_step(const Population& mu1,
                                                      const Population& mu2,
                                                      const StepDistribution& dist,
                                                      RngStream& shared_rng) {
    if (!stochastic_order(mu1, mu2))
        throw OrderViolated("coupled_step requires mu1 ≺ mu2");
    const std::size_t n2 = mu2.size();
    std::vector<double> steps(2 * n2);
    dist.sample(shared_rng, steps);

    Population z1 = mu1;
    Population z2 = mu2;
    StepWorkspace ws;
    branch_select_step_ranked(z1, std::span<const double>(steps).first(2 * mu1.size()), ws);
    branch_select_step_ranked(z2, steps, ws);
    return {std::move(z1), std::move(z2)};
}

}  // namespace frontlab
