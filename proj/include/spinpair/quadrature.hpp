#ifndef SPINPAIR_QUADRATURE_HPP
#define SPINPAIR_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include "spinpair/core.hpp"

// Adaptive Gauss-Kronrod (G7/K15) quadrature for smooth complex integrands.
namespace spinpair::quad {

namespace detail {
// K15 abscissae (positive half) and weights; even-index nodes form the
// embedded G7 rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, complexd& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const complexd fc = f(c);
    complexd resg = kWg[3] * fc;
    complexd resk = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const complexd f1 = f(c - x);
        const complexd f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

template <class F>
complexd refine(const F& f, double a, double b, complexd whole, double err,
                double tol, int depth) {
    if (err <= tol || depth > 50) {
        if (!std::isfinite(whole.real()) || !std::isfinite(whole.imag()))
            throw NumericalError("quadrature: non-finite integrand");
        return whole;
    }
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) return whole;  // interval collapsed to rounding
    complexd left, right;
    double el, er;
    gk15(f, a, mid, left, el);
    gk15(f, mid, b, right, er);
    return refine(f, a, mid, left, el, 0.5 * tol, depth + 1) +
           refine(f, mid, b, right, er, 0.5 * tol, depth + 1);
}
}  // namespace detail

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    // Initial uniform subdivision before adapting; raise for integrands
    // oscillating many times across [a, b].
    int initial_segments = 1;
};

// Integrates f over [a, b]. Throws NumericalError on non-finite values.
template <class F>
complexd integrate(const F& f, double a, double b, const Options& opt = {}) {
    if (a == b) return {0.0, 0.0};
    const int n0 = std::max(1, opt.initial_segments);
    const double h = (b - a) / n0;

    // First pass for the magnitude scale, then refine against the combined
    // absolute/relative tolerance split across the initial segments.
    double err_sum = 0.0;
    complexd rough{0.0, 0.0};
    for (int i = 0; i < n0; ++i) {
        complexd v;
        double e;
        detail::gk15(f, a + i * h, a + (i + 1) * h, v, e);
        rough += v;
        err_sum += e;
    }
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(rough));
    if (err_sum <= tol && std::isfinite(rough.real()) && std::isfinite(rough.imag()))
        return rough;

    complexd total{0.0, 0.0};
    for (int i = 0; i < n0; ++i) {
        complexd v;
        double e;
        const double lo = a + i * h;
        const double hi = a + (i + 1) * h;
        detail::gk15(f, lo, hi, v, e);
        total += detail::refine(f, lo, hi, v, e, tol / n0, 0);
    }
    return total;
}

template <class F>
double integrate_real(const F& f, double a, double b, const Options& opt = {}) {
    return integrate([&](double x) { return complexd(f(x), 0.0); }, a, b, opt).real();
}

}  // namespace spinpair::quad

#endif
