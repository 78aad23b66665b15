#pragma once

// Scaling-law least squares: the (c, a) fit of gaps against c (log N + a)^-2,
// the free-power fit c (log N)^-beta, and the two Bernoulli regimes
// (power in N, exponential in N).

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "frontlab/errors.hpp"

namespace frontlab {

enum class FitModel { LogInverseSquare, FreePowerLogN, PowerInN, ExponentialInN };

inline std::string fit_model_name(FitModel m) {
    switch (m) {
        case FitModel::LogInverseSquare: return "log_inverse_square";
        case FitModel::FreePowerLogN: return "free_power_logN";
        case FitModel::PowerInN: return "power_in_N";
        case FitModel::ExponentialInN: return "exponential_in_N";
    }
    return "?";
}

struct FitResult {
    FitModel model = FitModel::FreePowerLogN;
    double c_hat = 0.0;     // amplitude
    double beta_hat = 0.0;  // exponent (or rate d for the exponential model)
    double a_hat = 0.0;     // offset (log_inverse_square) or intercept (exponential)
    double r_squared = 0.0;
    std::vector<double> residuals;  // data-space residuals, one per input point
};

namespace detail {

struct LinFit {
    double slope = 0.0, intercept = 0.0, r_squared = 1.0;
};

// Ordinary least squares y = slope x + intercept; r^2 in the fitted space.
inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
    }
    f.r_squared = syy > 0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    return f;
}

}  // namespace detail

/// Free-power diagnostic: gaps fitted as c (log N)^{-beta} by log-log least
/// squares.  Makes no amplitude assumption; beta near 2 is the
/// Brunet-Derrida signature.
inline FitResult fit_free_power(const std::vector<double>& n_values,
                                const std::vector<double>& gaps) {
    if (n_values.size() < 4 || n_values.size() != gaps.size())
        throw InsufficientData("free-power fit needs >= 4 (N, gap) points");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (!(gaps[i] > 0.0))
            throw NonPositiveGap("gap must be positive at N=" + std::to_string(n_values[i]));
        x.push_back(std::log(std::log(n_values[i])));
        y.push_back(std::log(gaps[i]));
    }
    const detail::LinFit lf = detail::linear_fit(x, y);
    FitResult fit;
    fit.model = FitModel::FreePowerLogN;
    fit.beta_hat = -lf.slope;
    fit.c_hat = std::exp(lf.intercept);
    fit.r_squared = lf.r_squared;
    for (std::size_t i = 0; i < gaps.size(); ++i)
        fit.residuals.push_back(gaps[i] -
                                fit.c_hat * std::pow(std::log(n_values[i]), -fit.beta_hat));
    return fit;
}

/// Theorem-1.1 fit: gap(N) = c (log N + a)^{-2}.  The offset a absorbs the
/// next-order correction at desk-scale N; c plays the role of chi(p).
/// beta_hat is filled from the companion free-power fit.
inline FitResult fit_log_square(const std::vector<double>& n_values,
                                const std::vector<double>& gaps) {
    if (n_values.size() < 4 || n_values.size() != gaps.size())
        throw InsufficientData("log-square fit needs >= 4 (N, gap) points");
    double min_logn = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (!(gaps[i] > 0.0))
            throw NonPositiveGap("gap must be positive at N=" + std::to_string(n_values[i]));
        min_logn = std::min(min_logn, std::log(n_values[i]));
    }

    // For fixed a the optimal amplitude is linear least squares; minimize the
    // residual sum over a by coarse grid plus golden-section refinement.
    auto amplitude_for = [&](double a) {
        double num = 0, den = 0;
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            const double u = std::pow(std::log(n_values[i]) + a, -2.0);
            num += gaps[i] * u;
            den += u * u;
        }
        return num / den;
    };
    auto ss_res_for = [&](double a) {
        const double c = amplitude_for(a);
        double ss = 0;
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            const double e = gaps[i] - c * std::pow(std::log(n_values[i]) + a, -2.0);
            ss += e * e;
        }
        return ss;
    };

    const double a_lo = -min_logn + 0.05, a_hi = 60.0;
    double best_a = 0.0, best_ss = std::numeric_limits<double>::infinity();
    const int grid = 2400;
    for (int k = 0; k <= grid; ++k) {
        const double a = a_lo + (a_hi - a_lo) * k / grid;
        const double ss = ss_res_for(a);
        if (ss < best_ss) {
            best_ss = ss;
            best_a = a;
        }
    }
    const double step = (a_hi - a_lo) / grid;
    double lo = std::max(a_lo, best_a - step), hi = std::min(a_hi, best_a + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = ss_res_for(x1), f2 = ss_res_for(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = ss_res_for(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = ss_res_for(x2);
        }
    }
    best_a = 0.5 * (lo + hi);

    FitResult fit;
    fit.model = FitModel::LogInverseSquare;
    fit.a_hat = best_a;
    fit.c_hat = amplitude_for(best_a);
    double ss_res = 0, ss_tot = 0, mean = 0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double pred = fit.c_hat * std::pow(std::log(n_values[i]) + best_a, -2.0);
        fit.residuals.push_back(gaps[i] - pred);
        ss_res += (gaps[i] - pred) * (gaps[i] - pred);
        ss_tot += (gaps[i] - mean) * (gaps[i] - mean);
    }
    fit.r_squared = ss_tot > 0 ? std::max(0.0, std::min(1.0, 1.0 - ss_res / ss_tot)) : 1.0;
    fit.beta_hat = fit_free_power(n_values, gaps).beta_hat;
    return fit;
}

/// Bernoulli regimes of Theorems 7.1/7.2: gaps are 1 - v_point.
/// alpha == 1/2: (1-v) = c N^{-gamma} by log-log least squares (gamma in
/// beta_hat).  alpha > 1/2: log(1-v) = -d N + e (rate d in beta_hat,
/// intercept e in a_hat).
inline FitResult fit_bernoulli_regimes(const std::vector<double>& n_values,
                                       const std::vector<double>& gaps, double alpha) {
    if (!(alpha >= 0.5)) throw Error("fit_bernoulli_regimes requires alpha >= 1/2");
    if (n_values.size() < 3 || n_values.size() != gaps.size())
        throw InsufficientData("regime fit needs >= 3 (N, gap) points");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (!(gaps[i] > 0.0))
            throw NonPositiveGap("gap must be positive at N=" + std::to_string(n_values[i]));
        x.push_back(alpha == 0.5 ? std::log(n_values[i]) : n_values[i]);
        y.push_back(std::log(gaps[i]));
    }
    const detail::LinFit lf = detail::linear_fit(x, y);
    FitResult fit;
    fit.r_squared = lf.r_squared;
    if (alpha == 0.5) {
        fit.model = FitModel::PowerInN;
        fit.beta_hat = -lf.slope;  // gamma
        fit.c_hat = std::exp(lf.intercept);
        for (std::size_t i = 0; i < gaps.size(); ++i)
            fit.residuals.push_back(gaps[i] - fit.c_hat * std::pow(n_values[i], -fit.beta_hat));
    } else {
        fit.model = FitModel::ExponentialInN;
        fit.beta_hat = -lf.slope;  // rate d
        fit.a_hat = lf.intercept;  // e
        fit.c_hat = std::exp(lf.intercept);
        for (std::size_t i = 0; i < gaps.size(); ++i)
            fit.residuals.push_back(gaps[i] - std::exp(lf.intercept - fit.beta_hat * n_values[i]));
    }
    return fit;
}

}  // namespace frontlab
