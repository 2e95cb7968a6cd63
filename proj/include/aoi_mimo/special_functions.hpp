#pragma once

// Scalar special functions used throughout: regularized incomplete gamma
// (survival of a gamma RV), the Gaussian Q-function and its inverse.
// Everything is plain double precision; combinatorial factors always go
// through std::lgamma so no raw factorial is ever formed.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aoi_mimo {

namespace detail {

// Regularized lower incomplete gamma P(a,x) by power series, x < a+1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p_series: no convergence");
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction,
// x >= a+1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 20000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 4e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_q_cf: no convergence");
}

}  // namespace detail

// Q(a,x) = Pr{Gamma(a,1) >= x}, the regularized upper incomplete gamma.
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x))
        throw std::invalid_argument("gamma_q: need finite a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// P(a,x) = 1 - Q(a,x).
inline double gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x))
        throw std::invalid_argument("gamma_p: need finite a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

// Survival function of Gamma(shape, scale) at x: Pr{G >= x} = Q(shape, x/scale).
inline double gamma_survival(double shape, double scale, double x) {
    if (!std::isfinite(shape) || !std::isfinite(scale) || !std::isfinite(x))
        throw std::invalid_argument("gamma_survival: non-finite input");
    if (!(shape > 0.0)) throw std::invalid_argument("gamma_survival: shape must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("gamma_survival: scale must be > 0");
    if (!(x >= 0.0)) throw std::invalid_argument("gamma_survival: x must be >= 0");
    return gamma_q(shape, x / scale);
}

// Gaussian tail Q(x) = Pr{N(0,1) >= x}.
inline double q_func(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("q_func: non-finite input");
    return 0.5 * std::erfc(x * 0.7071067811865475244);
}

// Standard normal density.
inline double normal_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

namespace detail {

// Acklam's rational approximation to the standard normal quantile,
// |error| ~ 1e-9; used only as the starting point for Newton.
inline double norm_ppf_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

// Inverse of q_func on (0,1): rational initial guess plus two Newton steps.
inline double q_inv(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("q_inv: p must be in (0,1)");
    // Q(x) = 1 - Phi(x), so Q^{-1}(p) = -Phi^{-1}(p).
    double x = -detail::norm_ppf_estimate(p);
    for (int i = 0; i < 2; ++i) {
        // d/dx Q(x) = -phi(x)
        x += (q_func(x) - p) / normal_pdf(x);
    }
    return x;
}

}  // namespace aoi_mimo
