// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "opbayes/bessel.hpp"
#include "opbayes/gamma_fn.hpp"
#include "opbayes/quadrature.hpp"
#include "opbayes/random.hpp"

namespace opbayes {

/// Which member of the GIG(nu, omega, phi) family a parameter triple denotes.
/// The degenerate members are explicit, not numerical limits: the zero-expert
/// posterior must be the classical Gamma conjugate case bit for bit.
enum class GigBranch {
    proper,         ///< omega > 0, phi > 0, any real nu
    gamma,          ///< phi = 0, omega > 0, nu > -1: Gamma(nu + 1, 1/omega)
    inverse_gamma,  ///< omega = 0, phi > 0, nu < -1: InvGamma(-nu - 1, phi)
};

/// Parameters of the generalized inverse Gaussian law with density
/// proportional to x^nu exp(-omega x - phi / x). The field order (nu, omega,
/// phi) is the canonical one everywhere in this library.
struct GigParams {
    double nu = 0.0;
    double omega = 0.0;
    double phi = 0.0;

    GigBranch branch() const {
        if (!std::isfinite(nu) || !std::isfinite(omega) || !std::isfinite(phi) || omega < 0.0 ||
            phi < 0.0)
            throw std::domain_error("GigParams: parameters must be finite, omega >= 0, phi >= 0");
        if (omega > 0.0 && phi > 0.0) return GigBranch::proper;
        if (phi == 0.0 && omega > 0.0 && nu > -1.0) return GigBranch::gamma;
        if (omega == 0.0 && phi > 0.0 && nu < -1.0) return GigBranch::inverse_gamma;
        throw std::domain_error("GigParams: invalid (nu, omega, phi) combination");
    }
};

/// Gamma(shape alpha, scale beta): density x^{alpha-1} e^{-x/beta} /
/// (beta^alpha Gamma(alpha)); mean alpha * beta.
struct GammaParams {
    double shape = 1.0;
    double scale = 1.0;

    void validate() const {
        if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale))
            throw std::domain_error("GammaParams: shape and scale must be positive and finite");
    }

    double mean() const { return shape * scale; }

    /// The GIG triple this Gamma law is the phi = 0 member of.
    GigParams as_gig() const {
        validate();
        return GigParams{shape - 1.0, 1.0 / scale, 0.0};
    }
};

namespace detail {

inline double gig_log_norm_proper(const GigParams& p) {
    // ln[(omega/phi)^{(nu+1)/2} / (2 K_{nu+1}(2 sqrt(omega phi)))]
    const double z = 2.0 * std::sqrt(p.omega * p.phi);
    return 0.5 * (p.nu + 1.0) * (std::log(p.omega) - std::log(p.phi)) - std::log(2.0) -
           log_bessel_k(p.nu + 1.0, z);
}

}  // namespace detail

inline double gig_log_pdf(const GigParams& params, double x) {
    const GigBranch br = params.branch();
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("gig_log_pdf: require x > 0");
    switch (br) {
        case GigBranch::proper:
            return detail::gig_log_norm_proper(params) + params.nu * std::log(x) -
                   params.omega * x - params.phi / x;
        case GigBranch::gamma: {
            const double a = params.nu + 1.0;
            return a * std::log(params.omega) - std::lgamma(a) + params.nu * std::log(x) -
                   params.omega * x;
        }
        case GigBranch::inverse_gamma: {
            const double a = -params.nu - 1.0;
            return a * std::log(params.phi) - std::lgamma(a) + params.nu * std::log(x) -
                   params.phi / x;
        }
    }
    throw std::logic_error("gig_log_pdf: unreachable");
}

/// Density evaluator with the normalization constant computed once; use this
/// inside quadrature loops instead of re-deriving K_{nu+1} per point.
class GigDensity {
public:
    explicit GigDensity(const GigParams& params) : params_(params) {
        switch (params.branch()) {
            case GigBranch::proper:
                log_norm_ = detail::gig_log_norm_proper(params);
                break;
            case GigBranch::gamma:
                log_norm_ = (params.nu + 1.0) * std::log(params.omega) -
                            std::lgamma(params.nu + 1.0);
                break;
            case GigBranch::inverse_gamma:
                log_norm_ = (-params.nu - 1.0) * std::log(params.phi) -
                            std::lgamma(-params.nu - 1.0);
                break;
        }
    }

    const GigParams& params() const { return params_; }

    double log_pdf(double x) const {
        return log_norm_ + params_.nu * std::log(x) - params_.omega * x - params_.phi / x;
    }

    double operator()(double x) const { return x > 0.0 ? std::exp(log_pdf(x)) : 0.0; }

private:
    GigParams params_;
    double log_norm_ = 0.0;
};

/// E[X^order] for integer order >= 1. On the proper branch this is the Bessel
/// ratio form (phi/omega)^{a/2} K_{nu+1+a}(2 sqrt(omega phi)) / K_{nu+1}(...).
/// The same formula extends to real a >= 1 (K_nu handles any real order);
/// only integer orders are exposed here.
inline double gig_moment(const GigParams& params, int order) {
    if (order < 1) throw std::domain_error("gig_moment: require order >= 1");
    switch (params.branch()) {
        case GigBranch::proper: {
            const double z = 2.0 * std::sqrt(params.omega * params.phi);
            const double a = static_cast<double>(order);
            return std::exp(0.5 * a * (std::log(params.phi) - std::log(params.omega)) +
                            log_bessel_k(params.nu + 1.0 + a, z) - log_bessel_k(params.nu + 1.0, z));
        }
        case GigBranch::gamma: {
            const double shape = params.nu + 1.0;
            return std::exp(std::lgamma(shape + order) - std::lgamma(shape) -
                            order * std::log(params.omega));
        }
        case GigBranch::inverse_gamma: {
            const double a = -params.nu - 1.0;
            if (!(a > order))
                throw std::domain_error("gig_moment: moment of this order does not exist");
            return std::exp(order * std::log(params.phi) + std::lgamma(a - order) - std::lgamma(a));
        }
    }
    throw std::logic_error("gig_moment: unreachable");
}

inline double gig_mean(const GigParams& params) {
    switch (params.branch()) {
        case GigBranch::proper: {
            const double z = 2.0 * std::sqrt(params.omega * params.phi);
            return std::sqrt(params.phi / params.omega) * bessel_ratio(params.nu + 1.0, z);
        }
        case GigBranch::gamma:
            return (params.nu + 1.0) / params.omega;
        case GigBranch::inverse_gamma:
            // InvGamma(a = -nu-1, scale phi) has mean phi / (a - 1) iff a > 1.
            if (params.nu >= -2.0)
                throw std::domain_error("gig_mean: mean does not exist for nu >= -2 with omega = 0");
            return params.phi / (-params.nu - 2.0);
    }
    throw std::logic_error("gig_mean: unreachable");
}

/// Exact mode (nu + sqrt(nu^2 + 4 omega phi)) / (2 omega), written so that the
/// nu < 0 case does not cancel.
inline double gig_mode(const GigParams& params) {
    const GigBranch br = params.branch();
    if (br == GigBranch::inverse_gamma)
        throw std::domain_error("gig_mode: requires omega > 0");
    const double disc = std::sqrt(params.nu * params.nu + 4.0 * params.omega * params.phi);
    if (params.nu >= 0.0) return (params.nu + disc) / (2.0 * params.omega);
    return (2.0 * params.phi) / (disc - params.nu);
}

/// First-order approximation of the mode for small 4 omega phi / nu^2:
/// (nu/omega) 1{nu >= 0} + phi/|nu|. This is the sqrt(1 + 2x) ~ 1 + x
/// expansion of the exact mode; it reproduces the exact mode's phi -> 0 limit
/// nu/omega on the positive side and phi/|nu| on the negative side.
inline double gig_mode_approx(const GigParams& params) {
    params.branch();
    if (params.nu == 0.0) throw std::domain_error("gig_mode_approx: requires nu != 0");
    const double head = params.nu >= 0.0 ? params.nu / params.omega : 0.0;
    return head + params.phi / std::abs(params.nu);
}

/// CDF. Proper branch: adaptive quadrature of the density split at the mode,
/// with the u -> 1/u change of variable for the right tail; degenerate
/// branches reduce to the regularized incomplete gamma.
inline double gig_cdf(const GigParams& params, double x) {
    const GigBranch br = params.branch();
    if (!std::isfinite(x)) throw std::domain_error("gig_cdf: x must be finite");
    if (x <= 0.0) return 0.0;
    switch (br) {
        case GigBranch::gamma:
            return gamma_p(params.nu + 1.0, params.omega * x);
        case GigBranch::inverse_gamma:
            return gamma_q(-params.nu - 1.0, params.phi / x);
        case GigBranch::proper:
            break;
    }
    constexpr double kTol = 1e-10;
    const GigDensity pdf(params);
    const double m = gig_mode(params);
    double value;
    if (x <= m) {
        value = integrate_adaptive(pdf, 0.0, x, kTol);
    } else {
        const double tail = integrate_adaptive(
            [&](double t) {
                if (t <= 0.0) return 0.0;
                const double u = 1.0 / t;
                const double lp = pdf.log_pdf(u);
                if (!(lp > -700.0)) return 0.0;  // underflow; avoids 0 * inf at extreme u
                return std::exp(lp) * u * u;
            },
            0.0, 1.0 / x, kTol);
        value = 1.0 - tail;
    }
    return std::clamp(value, 0.0, 1.0);
}

namespace detail {

// Cubic from the ratio-of-uniforms construction: stationary points of
// (y - m) sqrt(kernel(y) / kernel(m)).
struct GigSamplerCubic {
    double beta;
    double nu;
    double m;
    double operator()(double y) const {
        return 0.5 * beta * y * y * y - y * y * (0.5 * beta * m + nu + 2.0) +
               y * (nu * m - 0.5 * beta) + 0.5 * beta * m;
    }
    double deriv(double y) const {
        return 1.5 * beta * y * y - 2.0 * y * (0.5 * beta * m + nu + 2.0) + (nu * m - 0.5 * beta);
    }
};

// Bracketed Newton with bisection fallback; [lo, hi] must straddle a root.
inline double solve_bracketed(const GigSamplerCubic& g, double lo, double hi) {
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::runtime_error("gig_sample: root bracket lost");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = g(x);
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double d = g.deriv(x);
        double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-12 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    throw std::runtime_error("gig_sample: cubic root-finding did not converge");
}

}  // namespace detail

/// One exact draw from a proper GIG by Dagpunar's relocated ratio-of-uniforms
/// method. The candidate is Y = m + (a V + b (1 - V)) / U with acceptance on
/// -ln U; X = Y / sqrt(omega/phi) is then GIG(nu, omega, phi).
template <UniformStream S>
inline double gig_sample(const GigParams& params, S& rng) {
    if (params.branch() != GigBranch::proper)
        throw std::domain_error("gig_sample: requires the proper branch (omega > 0, phi > 0)");
    const double nu = params.nu;
    const double alpha = std::sqrt(params.omega / params.phi);
    const double beta = 2.0 * std::sqrt(params.omega * params.phi);
    const double disc = std::sqrt(nu * nu + beta * beta);
    const double m = nu >= 0.0 ? (nu + disc) / beta : beta / (disc - nu);
    const detail::GigSamplerCubic g{beta, nu, m};

    double y0 = m;
    int doubling = 0;
    while (g(y0) <= 0.0) {
        y0 *= 2.0;
        if (++doubling > 1100) throw std::runtime_error("gig_sample: failed to bracket y+");
    }
    const double y_plus = detail::solve_bracketed(g, m, y0);
    const double y_minus = detail::solve_bracketed(g, 0.0, m);

    auto envelope = [&](double y) {
        return (y - m) * std::pow(y / m, 0.5 * nu) *
               std::exp(-0.25 * beta * (y + 1.0 / y - m - 1.0 / m));
    };
    const double a = envelope(y_plus);
    const double b = envelope(y_minus);
    const double c = -0.25 * beta * (m + 1.0 / m) + 0.5 * nu * std::log(m);

    constexpr long kMaxRejections = 1000000;
    for (long it = 0; it < kMaxRejections; ++it) {
        const double u = rng.u01();
        const double v = rng.u01();
        const double y = m + (a * v + b * (1.0 - v)) / u;
        if (y <= 0.0) continue;
        if (-std::log(u) >= -0.5 * nu * std::log(y) + 0.25 * beta * (y + 1.0 / y) + c)
            return y / alpha;
    }
    throw std::runtime_error("gig_sample: rejection loop exceeded iteration cap");
}

}  // namespace opbayes
