// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "opbayes/gamma_fn.hpp"
#include "opbayes/gig.hpp"

namespace opbayes {

// ---------------------------------------------------------------------------
// Hyper-parameter estimation for the Gamma priors and the expert credibility
// parameter xi = 1/Vco^2.
// ---------------------------------------------------------------------------

/// A prior pinned by its mean and one interval probability, e.g.
/// E[Lambda] = 0.5 and P[0.25 <= Lambda <= 0.75] = 2/3.
struct PriorConstraint {
    double mean = 0.0;
    double interval_low = 0.0;
    double interval_high = 0.0;
    double interval_prob = 0.0;

    void validate() const {
        if (!(interval_low > 0.0) || !(interval_low < mean) || !(mean < interval_high))
            throw std::domain_error(
                "PriorConstraint: require 0 < interval_low < mean < interval_high");
        if (!(interval_prob > 0.0) || !(interval_prob < 1.0))
            throw std::domain_error("PriorConstraint: require interval_prob in (0, 1)");
    }
};

/// Fit Gamma(alpha0, beta0) holding alpha0 * beta0 = mean exactly and matching
/// the interval probability by bisection over alpha0 in [1e-3, 1e4].
inline GammaParams fit_gamma_from_constraint(const PriorConstraint& c) {
    c.validate();
    auto prob = [&](double alpha) {
        // beta = mean / alpha, so x / beta = x * alpha / mean.
        const double lo = c.interval_low * alpha / c.mean;
        const double hi = c.interval_high * alpha / c.mean;
        return gamma_p(alpha, hi) - gamma_p(alpha, lo);
    };
    double a_lo = 1e-3;
    double a_hi = 1e4;
    double f_lo = prob(a_lo) - c.interval_prob;
    double f_hi = prob(a_hi) - c.interval_prob;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw std::domain_error(
            "fit_gamma_from_constraint: no solution in the search bracket (infeasible constraint)");
    double alpha = 0.0;
    for (int it = 0; it < 300; ++it) {
        alpha = 0.5 * (a_lo + a_hi);
        const double f = prob(alpha) - c.interval_prob;
        if (std::abs(f) < 1e-9 || (a_hi - a_lo) < 1e-12 * alpha) break;
        if ((f > 0.0) == (f_lo > 0.0)) {
            a_lo = alpha;
            f_lo = f;
        } else {
            a_hi = alpha;
        }
    }
    return GammaParams{alpha, c.mean / alpha};
}

/// Gamma parameters from mean and coefficient of variation:
/// alpha0 = 1/vco^2, beta0 = mean * vco^2.
inline GammaParams gamma_from_mean_vco(double mean, double vco) {
    if (!(mean > 0.0)) throw std::domain_error("gamma_from_mean_vco: require mean > 0");
    if (!(vco >= 1e-6))
        throw std::domain_error("gamma_from_mean_vco: vco below 1e-6 would overflow alpha0");
    return GammaParams{1.0 / (vco * vco), mean * vco * vco};
}

/// xi estimate (mean/stdev)^2 from a panel of positive opinions; stdev uses
/// divisor M - 1.
inline double xi_from_opinions_moments(std::span<const double> opinions) {
    if (opinions.size() < 2)
        throw std::domain_error("xi_from_opinions_moments: need at least two opinions");
    double mean = 0.0;
    for (double v : opinions) {
        if (!(v > 0.0))
            throw std::domain_error("xi_from_opinions_moments: opinions must be positive");
        mean += v;
    }
    mean /= static_cast<double>(opinions.size());
    double ss = 0.0;
    for (double v : opinions) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(opinions.size() - 1);
    if (!(var > 0.0))
        throw std::domain_error("xi_from_opinions_moments: opinions are constant (degenerate)");
    return mean * mean / var;
}

/// Method-of-moments Gamma fit from industry samples: beta0 = var/mean,
/// alpha0 = mean/beta0.
inline GammaParams fit_gamma_moments(std::span<const double> industry_samples) {
    if (industry_samples.size() < 2)
        throw std::domain_error("fit_gamma_moments: need at least two samples");
    double mean = 0.0;
    for (double v : industry_samples) {
        if (!(v > 0.0)) throw std::domain_error("fit_gamma_moments: samples must be positive");
        mean += v;
    }
    mean /= static_cast<double>(industry_samples.size());
    double ss = 0.0;
    for (double v : industry_samples) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(industry_samples.size() - 1);
    if (!(var > 0.0)) throw std::domain_error("fit_gamma_moments: zero sample variance (degenerate)");
    const double beta = var / mean;
    return GammaParams{mean / beta, beta};
}

}  // namespace opbayes
