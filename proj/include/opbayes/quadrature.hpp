// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace opbayes {

namespace detail {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss
// rule (positive half; rules are symmetric).
inline constexpr double kKronrodNode[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kKronrodWeight[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGaussWeight[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
inline void gauss_kronrod_15(const F& f, double a, double b, double& kronrod, double& gauss) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double rk = 0.0;
    double rg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kKronrodNode[i];
        const double fv = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
        rk += kKronrodWeight[i] * fv;
        if (i % 2 == 1) rg += kGaussWeight[i / 2] * fv;
    }
    kronrod = rk * h;
    gauss = rg * h;
}

template <class F>
inline double gk_adaptive(const F& f, double a, double b, double abs_tol, int depth) {
    double rk, rg;
    gauss_kronrod_15(f, a, b, rk, rg);
    const double err = std::abs(rk - rg);
    if (err <= abs_tol || depth <= 0) return rk;
    const double m = 0.5 * (a + b);
    return gk_adaptive(f, a, m, 0.5 * abs_tol, depth - 1) +
           gk_adaptive(f, m, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (15|7) integration of f over [a, b] to an absolute
/// tolerance. f must be finite on the open interval; endpoint values where the
/// integrand underflows to zero are fine.
template <class F>
inline double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                 int max_depth = 48) {
    if (!(b >= a)) throw std::domain_error("integrate_adaptive: require b >= a");
    if (a == b) return 0.0;
    return detail::gk_adaptive(f, a, b, abs_tol, max_depth);
}

}  // namespace opbayes
