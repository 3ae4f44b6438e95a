// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace opbayes {

namespace detail {

// Lower regularized incomplete gamma by power series, for x < a + 1.
inline double gamma_p_series(double a, double x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 200000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * eps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p: series failed to converge");
}

// Upper regularized incomplete gamma by modified-Lentz continued fraction,
// for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 200000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_q: continued fraction failed to converge");
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double gamma_p(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(x) || x < 0.0)
        throw std::domain_error("gamma_p: require a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(x) || x < 0.0)
        throw std::domain_error("gamma_q: require a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

}  // namespace opbayes
