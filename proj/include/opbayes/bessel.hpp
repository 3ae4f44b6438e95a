// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opbayes {

// Arguments below this are rejected rather than extrapolated.
inline constexpr double kMinBesselArgument = 1e-12;

namespace detail {

// Orders at or above this are evaluated with the uniform (large-order)
// asymptotic expansion; below it, Temme/Steed seeds plus upward recurrence.
inline constexpr double kBesselAsymOrder = 200.0;

// Taylor coefficients of 1/Gamma(1+x) about x = 0 (Abramowitz & Stegun 6.1.34,
// shifted by one index).
inline constexpr double kInvGammaTaylor[] = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.04200263503409523553,
    0.16653861138229148950,
    -0.04219773455554433675,
    -0.00962197152787697356,
    0.00721894324666309954,
    -0.00116516759185906511,
    -0.00021524167411495097,
    0.00012805028238811619,
    -0.00002013485478078824,
    -0.00000125049348214267,
    0.00000113302723198170,
    -0.00000020563384169776,
    0.00000000611609510448,
    0.00000000500200764447,
    -0.00000000118127457049,
    0.00000000010434267117,
    0.00000000000778226344,
    -0.00000000000369680562,
    0.00000000000051003703,
    -0.00000000000002058326,
    -0.00000000000000534812,
    0.00000000000000122678,
    -0.00000000000000011813,
};

// gam1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)   (finite limit -gamma_E at 0)
// gam2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
// Computed from the odd/even halves of the Taylor series, which is stable for
// |mu| <= 1/2 (no cancellation near mu = 0).
inline void temme_gamma_terms(double mu, double& gam1, double& gam2,
                              double& one_over_gamma_1p, double& one_over_gamma_1m) {
    const double mu2 = mu * mu;
    double odd = 0.0;
    double even = 0.0;
    double p = 1.0;  // mu^(2j)
    constexpr int n = static_cast<int>(sizeof(kInvGammaTaylor) / sizeof(double));
    for (int j = 0; 2 * j < n; ++j) {
        even += kInvGammaTaylor[2 * j] * p;
        if (2 * j + 1 < n) odd += kInvGammaTaylor[2 * j + 1] * p;
        p *= mu2;
    }
    gam1 = -odd;
    gam2 = even;
    one_over_gamma_1p = gam2 - mu * gam1;
    one_over_gamma_1m = gam2 + mu * gam1;
}

// Temme's series for K_mu(x), K_{mu+1}(x), |mu| <= 1/2, 0 < x <= 2.
// Returns the pair scaled by e^x.
inline std::pair<double, double> bessel_k_seed_series(double mu, double x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double x2 = 0.5 * x;
    const double pimu = M_PI * mu;
    const double fact = (pimu == 0.0) ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (e == 0.0) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gamma_terms(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    const double mu2 = mu * mu;
    for (int i = 1; i <= 500; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        const double del1 = c * (p - i * ff);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * eps) break;
    }
    const double scale = std::exp(x);  // x <= 2, cannot overflow
    return {sum * scale, (2.0 / x) * sum1 * scale};
}

// Steed/Thompson-Barnett continued fraction CF2 for K_mu(x), K_{mu+1}(x),
// |mu| <= 1/2, x > 2. Returns the pair scaled by e^x.
inline std::pair<double, double> bessel_k_seed_cf(double mu, double x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 20000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    const double kmu = std::sqrt(M_PI / (2.0 * x)) / s;
    const double kmu1 = kmu * (mu + x + 0.5 - h) / x;
    return {kmu, kmu1};
}

// Debye polynomials u_k(t) (A&S 9.3.9/9.3.10), generated once from the
// recurrence u_{k+1} = t^2 (1-t^2) u_k' / 2 + (1/8) int_0^t (1-5 s^2) u_k ds.
inline const std::vector<std::vector<double>>& debye_u_polys() {
    static const std::vector<std::vector<double>> polys = [] {
        constexpr int kmax = 20;
        std::vector<std::vector<double>> u;
        u.push_back({1.0});
        for (int k = 0; k < kmax; ++k) {
            const auto& cur = u.back();
            const int deg = static_cast<int>(cur.size()) - 1;
            std::vector<double> next(static_cast<std::size_t>(deg) + 4, 0.0);
            // t^2 (1 - t^2) u' / 2
            for (int j = 1; j <= deg; ++j) {
                const double dj = j * cur[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(j + 1)] += 0.5 * dj;
                next[static_cast<std::size_t>(j + 3)] -= 0.5 * dj;
            }
            // (1/8) int_0^t (1 - 5 s^2) u_k(s) ds
            for (int j = 0; j <= deg; ++j) {
                const double cj = cur[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(j + 1)] += 0.125 * cj / (j + 1);
                next[static_cast<std::size_t>(j + 3)] -= 0.625 * cj / (j + 3);
            }
            u.push_back(std::move(next));
        }
        return u;
    }();
    return polys;
}

inline double eval_poly(const std::vector<double>& coeff, double t) {
    double r = 0.0;
    for (std::size_t j = coeff.size(); j-- > 0;) r = r * t + coeff[j];
    return r;
}

// Uniform large-order expansion of ln K_nu(x) (Olver; the expansion behind
// A&S 9.7.8). Accurate to ~1e-15 relative for nu >= ~150.
inline double log_bessel_k_asymptotic(double nu, double x) {
    const double z = x / nu;
    const double s = std::hypot(1.0, z);
    const double t = 1.0 / s;
    const double eta = s + std::log(z / (1.0 + s));
    const auto& u = debye_u_polys();
    double sum = 1.0;
    double nu_pow = 1.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < u.size(); ++k) {
        nu_pow *= nu;
        const double term = ((k & 1U) ? -1.0 : 1.0) * eval_poly(u[k], t) / nu_pow;
        const double mag = std::abs(term);
        if (mag >= prev_mag) break;  // asymptotic tail started to grow
        sum += term;
        prev_mag = mag;
        if (mag < 1e-18 * std::abs(sum)) break;
    }
    return 0.5 * std::log(M_PI / (2.0 * nu)) - nu * eta - 0.5 * std::log(s) + std::log(sum);
}

// ln K_nu(x) for nu >= 0 via seed pair at fractional order plus stable upward
// recurrence, rescaling by exact powers of two to dodge overflow.
inline double log_bessel_k_recurrence(double nu, double x) {
    const int n = static_cast<int>(std::floor(nu + 0.5));
    const double mu = nu - n;  // in [-1/2, 1/2)
    auto [klo, khi] = (x <= 2.0) ? bessel_k_seed_series(mu, x) : bessel_k_seed_cf(mu, x);
    double log_scale = -x;  // seeds carry a factor e^x
    if (n == 0) return std::log(klo) + log_scale;
    constexpr double kRescaleAt = 1e280;
    constexpr double kLn2 = 0.6931471805599453;
    for (int j = 1; j < n; ++j) {
        const double knext = klo + (2.0 * (mu + j) / x) * khi;
        klo = khi;
        khi = knext;
        if (khi > kRescaleAt) {
            klo = std::ldexp(klo, -1024);
            khi = std::ldexp(khi, -1024);
            log_scale += 1024.0 * kLn2;
        }
    }
    return std::log(khi) + log_scale;
}

inline void check_bessel_domain(double order, double argument, const char* fn) {
    if (!std::isfinite(order))
        throw std::domain_error(std::string(fn) + ": order must be finite");
    if (!std::isfinite(argument) || argument <= 0.0)
        throw std::domain_error(std::string(fn) + ": argument must be positive and finite");
    if (argument < kMinBesselArgument)
        throw std::domain_error(std::string(fn) + ": argument below " +
                                std::to_string(kMinBesselArgument) + " is out of supported range");
}

}  // namespace detail

/// ln K_nu(z), the modified Bessel function of the third kind, evaluated in
/// the log domain. Valid over |nu| well beyond 500 and 1e-12 <= z <= 1e6;
/// K_{-nu}(z) = K_nu(z) is used to reduce to nonnegative order.
inline double log_bessel_k(double order, double argument) {
    detail::check_bessel_domain(order, argument, "log_bessel_k");
    const double a = std::abs(order);
    if (a >= detail::kBesselAsymOrder) return detail::log_bessel_k_asymptotic(a, argument);
    return detail::log_bessel_k_recurrence(a, argument);
}

/// R_nu(z) = K_{nu+1}(z) / K_nu(z), formed as a log difference so that the
/// ratio survives where either K alone would overflow or underflow.
inline double bessel_ratio(double order, double argument) {
    detail::check_bessel_domain(order, argument, "bessel_ratio");
    return std::exp(log_bessel_k(order + 1.0, argument) - log_bessel_k(order, argument));
}

}  // namespace opbayes
