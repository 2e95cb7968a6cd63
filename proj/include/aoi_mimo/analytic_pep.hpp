#pragma once

// Exact packet error probability for finite N, finite M: gamma survival
// functions, the interference convolution density, and the binomial
// marginalization over the number of concurrently active users.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aoi_mimo/quadrature.hpp"
#include "aoi_mimo/special_functions.hpp"
#include "aoi_mimo/system_model.hpp"

namespace aoi_mimo {

enum class PepMethod { exact, asymptotic, monte_carlo };

struct PepResult {
    double p_e = 0.0;
    PepMethod method = PepMethod::exact;
    double ci_halfwidth = 0.0;      // monte_carlo only
    double truncation_bound = 0.0;  // exact only: binomial mass excluded from the k-sum
};

namespace detail {

// Smallest x with Pr{Gamma(k,1) >= x} <= tail, found by expanding a
// Gaussian-style first guess. Cheap: a handful of gamma_q evaluations.
inline double gamma_upper_quantile(double k, double tail) {
    double x = k + 10.0 * std::sqrt(k) + 40.0;
    while (gamma_q(k, x) > tail) x *= 1.25;
    return x;
}

inline double gamma_lower_quantile(double k, double tail) {
    double x = k - 10.0 * std::sqrt(k) - 40.0;
    if (x <= 0.0) return 0.0;
    while (gamma_p(k, x) > tail) {
        x *= 0.8;
        if (x < 1e-8) return 0.0;
    }
    return x;
}

}  // namespace detail

// Conditional success probability p_{i|k}: probability that a user with M
// receive antennas survives k active interferers at SINR threshold 1/alpha_rho
// and inverse SNR beta,
//   p_{i|k} = Pr{ alpha_rho*|h|^2 - Gamma(k,1) >= beta }.
// k = 0 reduces to the gamma survival function; k > 0 is the smooth tail
// integral over the interferer sum (one positive integrand, no cancellation).
inline double conditional_success(std::int64_t M, std::int64_t k, double alpha_rho,
                                  double beta) {
    if (M < 1) throw std::invalid_argument("conditional_success: M must be >= 1");
    if (k < 0) throw std::invalid_argument("conditional_success: k must be >= 0");
    if (!(alpha_rho > 0.0) || !std::isfinite(alpha_rho))
        throw std::invalid_argument("conditional_success: alpha_rho must be finite > 0");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("conditional_success: beta must be finite >= 0");

    const double m = static_cast<double>(M);
    if (k == 0) return gamma_survival(m, alpha_rho, beta);

    const double kk = static_cast<double>(k);
    const double lg_k = std::lgamma(kk);
    // Integration window from the Gamma(k,1) quantiles at 1e-14; the survival
    // factor is <= 1 so the excluded mass bounds the truncation error.
    const double lo = detail::gamma_lower_quantile(kk, 1e-14);
    const double hi = detail::gamma_upper_quantile(kk, 1e-14);
    const auto integrand = [&](double x) {
        const double logf = (kk - 1.0) * std::log(x) - x - lg_k;
        return std::exp(logf) * gamma_q(m, (beta + x) / alpha_rho);
    };
    const QuadResult q = integrate(integrand, std::max(lo, 1e-300), hi, 1e-11);
    if (!q.converged)
        throw std::runtime_error(
            "conditional_success: quadrature did not converge, error estimate " +
            std::to_string(q.error_estimate));
    return std::clamp(q.value, 0.0, 1.0);
}

// Density f_Z(z) of Z = alpha_rho*|h|^2 - Gamma(k,1) for z >= 0, via the
// convolution integral evaluated entirely in log space:
//   f_Z(z) = e^{-z/a} / ((k-1)!(M-1)! a^M) * int_0^inf u^{k-1}(z+u)^{M-1} e^{-2^rho u} du.
inline double pdf_z(double z, std::int64_t M, std::int64_t k, double rho) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("pdf_z: z must be >= 0");
    if (M < 1) throw std::invalid_argument("pdf_z: M must be >= 1");
    if (k < 1) throw std::invalid_argument("pdf_z: k must be >= 1");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("pdf_z: rho must be > 0");

    const double c = std::exp2(rho);  // 2^rho
    const double alpha = 1.0 / (c - 1.0);
    const double mm = static_cast<double>(M);
    const double kk = static_cast<double>(k);
    const double log_pre =
        -z / alpha - std::lgamma(kk) - std::lgamma(mm) - mm * std::log(alpha);

    const auto log_g = [&](double u) {
        double s = -c * u;
        if (k > 1) s += (kk - 1.0) * std::log(u);
        if (M > 1) s += (mm - 1.0) * std::log(z + u);
        return s;
    };
    // Interior maximum of log_g: stationary point of
    // (k-1)/u + (M-1)/(z+u) = c, a quadratic in u.
    double u_star;
    if (k == 1) {
        u_star = std::max(0.0, (mm - 1.0) / c - z);
    } else {
        const double b = c * z - (kk - 1.0) - (mm - 1.0);
        u_star = (-b + std::sqrt(b * b + 4.0 * c * (kk - 1.0) * z)) / (2.0 * c);
        if (!(u_star > 0.0)) u_star = (kk - 1.0) / c;  // z == 0 degenerate branch
    }
    const double u_ref = std::max(u_star, 1e-12);
    const double peak = log_g(u_ref);
    double u_hi = std::max(2.0 * u_ref, 1.0);
    while (log_g(u_hi) - peak > -46.0) u_hi *= 2.0;

    const auto scaled = [&](double u) {
        return u <= 0.0 ? 0.0 : std::exp(log_g(u) - peak);
    };
    const QuadResult q = integrate(scaled, 0.0, u_hi, 1e-12);
    if (!q.converged)
        throw std::runtime_error("pdf_z: quadrature did not converge, error estimate " +
                                 std::to_string(q.error_estimate));
    return std::exp(log_pre + peak + std::log(std::max(q.value, 0.0)));
}

// Log-probabilities of Binom(n, tau) at k = 0..n; tau = 1 degenerates to a
// point mass at k = n (log 0 entries are -inf).
inline std::vector<double> binomial_log_weights(std::int64_t n, double tau) {
    if (n < 0) throw std::invalid_argument("binomial_log_weights: n must be >= 0");
    if (!(tau > 0.0) || !(tau <= 1.0))
        throw std::invalid_argument("binomial_log_weights: tau must be in (0,1]");
    std::vector<double> lw(static_cast<std::size_t>(n) + 1);
    if (tau == 1.0) {
        std::fill(lw.begin(), lw.end(), -std::numeric_limits<double>::infinity());
        lw.back() = 0.0;
        return lw;
    }
    const double lt = std::log(tau);
    const double l1t = std::log1p(-tau);
    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::int64_t k = 0; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        lw[static_cast<std::size_t>(k)] = lg_n - std::lgamma(kd + 1.0) -
                                          std::lgamma(static_cast<double>(n - k) + 1.0) +
                                          kd * lt + static_cast<double>(n - k) * l1t;
    }
    return lw;
}

// Exact PEP: 1 - sum_k Binom(N-1,tau;k) p_{i|k}. For N-1 > 2000 the k-sum is
// restricted to an 8-standard-deviation window around the binomial mean; the
// excluded mass is computed and reported in truncation_bound. Deterministic
// index-ordered compensated summation keeps the result bit-stable.
inline PepResult exact_pep(const SystemConfig& cfg) {
    validate(cfg);
    if (!(cfg.spectral_eff > 0.0))
        throw std::invalid_argument("exact_pep: spectral_eff must be > 0");
    const DerivedParams d = derive(cfg);
    const std::int64_t n = cfg.n_users - 1;
    const std::vector<double> lw = binomial_log_weights(n, cfg.attempt_prob);

    std::int64_t k_lo = 0, k_hi = n;
    if (n > 2000) {
        const double mean = static_cast<double>(n) * cfg.attempt_prob;
        const double sd =
            std::sqrt(static_cast<double>(n) * cfg.attempt_prob * (1.0 - cfg.attempt_prob));
        k_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(mean - 8.0 * sd)));
        k_hi = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(mean + 8.0 * sd)));
    }

    double sum = 0.0, comp = 0.0;        // success mass, Kahan-compensated
    double wsum = 0.0, wcomp = 0.0;      // binomial mass actually summed
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double w = std::exp(lw[static_cast<std::size_t>(k)]);
        if (w == 0.0) continue;
        const double p = conditional_success(cfg.n_antennas, k, d.alpha_rho, d.beta);
        double y = w * p - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        y = w - wcomp;
        t = wsum + y;
        wcomp = (t - wsum) - y;
        wsum = t;
    }

    PepResult r;
    r.method = PepMethod::exact;
    r.truncation_bound = std::max(0.0, 1.0 - wsum);
    r.p_e = std::clamp(1.0 - sum, 0.0, 1.0);
    return r;
}

}  // namespace aoi_mimo
