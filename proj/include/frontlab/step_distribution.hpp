#pragma once

// Step distributions p with exact log-moment-generating-function calculus,
// samplers, and exponential tilting.
//
// Supported kinds: Bernoulli(alpha) on {0,1}, Uniform(a,b), Gaussian(mean,
// stdev), PointMass(c).  All four have Lambda finite on the whole line, so
// the domain bounds sigma and zeta are +infinity.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"
#include "frontlab/rng.hpp"

namespace frontlab {

enum class DistKind { Bernoulli, Uniform, Gaussian, PointMass };

namespace detail {

// log((e^t - 1)/t) and derivatives for Uniform(0,1).  Near t = 0 the closed
// forms cancel catastrophically; a short Taylor series takes over.
inline double unif01_lmgf(double t) {
    if (std::abs(t) < 1e-4) {
        const double t2 = t * t;
        return t / 2.0 + t2 / 24.0 - t2 * t2 / 2880.0 + t2 * t2 * t2 / 181440.0;
    }
    return std::log(std::expm1(t) / t);
}

inline double unif01_lmgf_d1(double t) {
    if (std::abs(t) < 1e-3) {
        const double t2 = t * t;
        return 0.5 + t / 12.0 - t * t2 / 720.0 + t * t2 * t2 / 30240.0;
    }
    return 1.0 + 1.0 / std::expm1(t) - 1.0 / t;
}

inline double unif01_lmgf_d2(double t) {
    if (std::abs(t) < 1e-3) {
        const double t2 = t * t;
        return 1.0 / 12.0 - t2 / 240.0 + t2 * t2 / 6048.0;
    }
    const double e = std::expm1(t);
    return 1.0 / (t * t) - (e + 1.0) / (e * e);
}

}  // namespace detail

/// An immutable step law.  Construction validates parameters; evaluation
/// never fails for the four built-in kinds.
class StepDistribution {
public:
    static StepDistribution bernoulli(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw InvalidDistribution("bernoulli requires 0 < alpha < 1");
        return StepDistribution(DistKind::Bernoulli, alpha, 0.0);
    }
    static StepDistribution uniform(double a, double b) {
        if (!(a < b)) throw InvalidDistribution("uniform requires a < b");
        return StepDistribution(DistKind::Uniform, a, b);
    }
    static StepDistribution gaussian(double mean, double stdev) {
        if (!(stdev > 0.0)) throw InvalidDistribution("gaussian requires stdev > 0");
        return StepDistribution(DistKind::Gaussian, mean, stdev);
    }
    static StepDistribution point_mass(double c) {
        return StepDistribution(DistKind::PointMass, c, 0.0);
    }

    DistKind kind() const noexcept { return kind_; }
    double param1() const noexcept { return p1_; }  // alpha | a | mean | c
    double param2() const noexcept { return p2_; }  // -     | b | stdev | -

    /// Lambda(t) = log E exp(t X), in closed form.  Finite everywhere for all
    /// built-in kinds (sigma = zeta = +inf).
    double lmgf(double t) const {
        switch (kind_) {
            case DistKind::Bernoulli:
                // log(1 - alpha + alpha e^t); log1p form is stable for t < 0
                // and large |t| alike.
                if (t > 0.0) return t + std::log1p((1.0 - p1_) * (std::exp(-t) - 1.0));
                return std::log1p(p1_ * std::expm1(t));
            case DistKind::Uniform:
                return p1_ * t + detail::unif01_lmgf((p2_ - p1_) * t);
            case DistKind::Gaussian:
                return p1_ * t + 0.5 * p2_ * p2_ * t * t;
            case DistKind::PointMass:
                return p1_ * t;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    /// Lambda'(t), closed form.
    double lmgf_d1(double t) const {
        switch (kind_) {
            case DistKind::Bernoulli: {
                // alpha e^t / (1 - alpha + alpha e^t) = logistic mean
                const double w = tilted_success(t);
                return w;
            }
            case DistKind::Uniform:
                return p1_ + (p2_ - p1_) * detail::unif01_lmgf_d1((p2_ - p1_) * t);
            case DistKind::Gaussian:
                return p1_ + p2_ * p2_ * t;
            case DistKind::PointMass:
                return p1_;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    /// Lambda''(t), closed form; nonnegative everywhere (convexity).
    double lmgf_d2(double t) const {
        switch (kind_) {
            case DistKind::Bernoulli: {
                const double w = tilted_success(t);
                return w * (1.0 - w);
            }
            case DistKind::Uniform: {
                const double s = p2_ - p1_;
                return s * s * detail::unif01_lmgf_d2(s * t);
            }
            case DistKind::Gaussian:
                return p2_ * p2_;
            case DistKind::PointMass:
                return 0.0;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    /// sup{t >= 0 : Lambda(-t) < inf} — (A1) bound.
    double sigma() const noexcept { return std::numeric_limits<double>::infinity(); }
    /// sup{t >= 0 : Lambda(t) < inf} — (A2) bound.
    double zeta() const noexcept { return std::numeric_limits<double>::infinity(); }

    /// Essential infimum of the step law (smallest reachable step).
    double essential_inf() const noexcept {
        switch (kind_) {
            case DistKind::Bernoulli: return 0.0;
            case DistKind::Uniform: return p1_;
            case DistKind::Gaussian: return -std::numeric_limits<double>::infinity();
            case DistKind::PointMass: return p1_;
        }
        return 0.0;
    }

    /// P(X >= x), used by barrier and Galton-Watson helpers.
    double tail_prob(double x) const {
        switch (kind_) {
            case DistKind::Bernoulli:
                if (x <= 0.0) return 1.0;
                if (x <= 1.0) return p1_;
                return 0.0;
            case DistKind::Uniform:
                if (x <= p1_) return 1.0;
                if (x >= p2_) return 0.0;
                return (p2_ - x) / (p2_ - p1_);
            case DistKind::Gaussian:
                return 0.5 * std::erfc((x - p1_) / (p2_ * std::numbers::sqrt2));
            case DistKind::PointMass:
                return x <= p1_ ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double sample_one(RngStream& rng) const {
        switch (kind_) {
            case DistKind::Bernoulli: return rng.uniform() < p1_ ? 1.0 : 0.0;
            case DistKind::Uniform: return p1_ + (p2_ - p1_) * rng.uniform();
            case DistKind::Gaussian: return p1_ + p2_ * rng.gaussian();
            case DistKind::PointMass: return p1_;
        }
        return 0.0;
    }

    void sample(RngStream& rng, std::span<double> out) const {
        for (double& v : out) v = sample_one(rng);
    }

    /// Success probability of the tilted Bernoulli: alpha e^t / (1-alpha+alpha e^t).
    double tilted_success(double t) const {
        // logistic(logit(alpha) + t), immune to e^t overflow
        const double z = std::log(p1_ / (1.0 - p1_)) + t;
        return 1.0 / (1.0 + std::exp(-z));
    }

    /// Parses "bernoulli:0.25", "uniform:0:1", "gaussian:0:1", "point:0.5".
    static StepDistribution parse(const std::string& spec);

    std::string to_spec() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
            case DistKind::Bernoulli: os << "bernoulli:" << p1_; break;
            case DistKind::Uniform: os << "uniform:" << p1_ << ":" << p2_; break;
            case DistKind::Gaussian: os << "gaussian:" << p1_ << ":" << p2_; break;
            case DistKind::PointMass: os << "point:" << p1_; break;
        }
        return os.str();
    }

private:
    StepDistribution(DistKind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

    DistKind kind_;
    double p1_, p2_;
};

/// The exponentially tilted law p~ with dp~/dp(x) = exp(t x - Lambda(t)).
/// Its mean is Lambda'(t) of the base law.
class TiltedDistribution {
public:
    TiltedDistribution(const StepDistribution& base, double t)
        : base_(base), t_(t), normalizer_(base.lmgf(t)) {}

    const StepDistribution& base() const noexcept { return base_; }
    double t() const noexcept { return t_; }
    double normalizer() const noexcept { return normalizer_; }
    double mean() const { return base_.lmgf_d1(t_); }
    double density_ratio(double x) const { return std::exp(t_ * x - normalizer_); }

    double sample_one(RngStream& rng) const {
        switch (base_.kind()) {
            case DistKind::Bernoulli:
                return rng.uniform() < base_.tilted_success(t_) ? 1.0 : 0.0;
            case DistKind::Uniform: {
                // exact inverse CDF for density ∝ e^{tx} on [a,b]
                const double a = base_.param1(), b = base_.param2();
                if (std::abs(t_) < 1e-13) return a + (b - a) * rng.uniform();
                const double u = rng.uniform();
                return a + std::log1p(u * std::expm1(t_ * (b - a))) / t_;
            }
            case DistKind::Gaussian: {
                const double sd = base_.param2();
                return base_.param1() + sd * sd * t_ + sd * rng.gaussian();
            }
            case DistKind::PointMass:
                return base_.param1();
        }
        return 0.0;
    }

    void sample(RngStream& rng, std::span<double> out) const {
        for (double& v : out) v = sample_one(rng);
    }

private:
    StepDistribution base_;
    double t_;
    double normalizer_;
};

inline TiltedDistribution tilt(const StepDistribution& dist, double t) {
    return TiltedDistribution(dist, t);
}

inline StepDistribution StepDistribution::parse(const std::string& spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);

    auto num = [&](std::size_t i) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(parts[i], &pos);
        } catch (const std::exception&) {
            throw InvalidDistribution("bad numeric parameter '" + parts[i] + "' in '" + spec + "'");
        }
        if (pos != parts[i].size())
            throw InvalidDistribution("bad numeric parameter '" + parts[i] + "' in '" + spec + "'");
        return v;
    };

    const std::string& name = parts[0];
    if (name == "bernoulli" && parts.size() == 2) return bernoulli(num(1));
    if (name == "uniform" && parts.size() == 3) return uniform(num(1), num(2));
    if (name == "gaussian" && parts.size() == 3) return gaussian(num(1), num(2));
    if (name == "point" && parts.size() == 2) return point_mass(num(1));
    throw InvalidDistribution("unrecognized distribution spec '" + spec +
                              "' (want bernoulli:a | uniform:a:b | gaussian:m:s | point:c)");
}

}  // namespace frontlab
