#pragma once

// Large-system (N, M -> infinity at fixed zeta = M/N) approximations: the
// CLT form of the packet error probability, the AoI it induces, the
// age-limited capacity, and the fixed-error trade-off curves. All returned
// values drop the O(1/sqrt(N)) terms (O(1/N^1.5) for supremum_rho).

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "aoi_mimo/analytic_pep.hpp"
#include "aoi_mimo/special_functions.hpp"
#include "aoi_mimo/system_model.hpp"

namespace aoi_mimo {

enum class AoiSource { analytic_asymptotic, simulated };

struct AoiEstimate {
    double delta = 1.0;  // network average AoI in slots
    bool infinite = false;  // success probability underflowed to zero
    std::optional<std::vector<double>> per_user;
    AoiSource source = AoiSource::analytic_asymptotic;
};

struct TradeoffPoint {
    double rho = 0.0;
    double tau_eps = 1.0;
    double delta = 1.0;
    std::int64_t n_users = 0;  // 0 encodes the infinite-user curve
    bool infinite_users = false;
};

// CLT argument w = sqrt(N)(tau - alpha_rho*zeta)/sqrt(alpha_rho^2*zeta + tau).
// Sign convention: success probability is Q(w), so p_e = 1 - Q(w).
inline double w_argument(std::int64_t N, double zeta, double tau, double alpha_rho) {
    return std::sqrt(static_cast<double>(N)) * (tau - alpha_rho * zeta) /
           std::sqrt(alpha_rho * alpha_rho * zeta + tau);
}

inline PepResult asymptotic_pep(const SystemConfig& cfg) {
    validate(cfg);
    if (!(cfg.spectral_eff > 0.0))
        throw std::invalid_argument("asymptotic_pep: spectral_eff must be > 0");
    const DerivedParams d = derive(cfg);
    PepResult r;
    r.method = PepMethod::asymptotic;
    r.p_e = 1.0 - q_func(w_argument(cfg.n_users, d.zeta, cfg.attempt_prob, d.alpha_rho));
    return r;
}

// Network-average AoI Delta = 1/(tau * Q(w)); flagged infinite when the
// success probability underflows so sweeps never abort mid-curve.
inline AoiEstimate asymptotic_aoi(const SystemConfig& cfg) {
    validate(cfg);
    if (!(cfg.spectral_eff > 0.0))
        throw std::invalid_argument("asymptotic_aoi: spectral_eff must be > 0");
    const DerivedParams d = derive(cfg);
    const double success = q_func(w_argument(cfg.n_users, d.zeta, cfg.attempt_prob, d.alpha_rho));
    AoiEstimate a;
    a.source = AoiSource::analytic_asymptotic;
    if (success * cfg.attempt_prob <= 0.0) {
        a.infinite = true;
        a.delta = std::numeric_limits<double>::infinity();
    } else {
        a.delta = 1.0 / (cfg.attempt_prob * success);
    }
    return a;
}

// Positive root of the quadratic that the condition p_e < eps induces on
// alpha_rho. Valid in Case 1 (zeta > Q^{-1}(eps)^2 / N); Case 2 has no
// valid solutions.
inline double alpha_rho_plus(double eps, std::int64_t N, double zeta, double tau) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument("alpha_rho_plus: eps must be in (0, 0.5)");
    if (N < 1) throw std::invalid_argument("alpha_rho_plus: N must be >= 1");
    if (!(zeta > 0.0)) throw std::invalid_argument("alpha_rho_plus: zeta must be > 0");
    if (!(tau > 0.0) || !(tau <= 1.0))
        throw std::invalid_argument("alpha_rho_plus: tau must be in (0,1]");
    const double q2 = q_inv(eps) * q_inv(eps);
    const double nd = static_cast<double>(N);
    if (!(zeta > q2 / nd))
        throw std::domain_error("alpha_rho_plus: no valid solutions (zeta <= Q^-1(eps)^2/N)");
    const double disc = tau * tau - tau * (1.0 - q2 / (nd * zeta)) * (tau - q2 / nd);
    return (tau + std::sqrt(disc)) / (zeta - q2 / nd);
}

// Supremum of the achievable spectral-efficiency set at target error eps:
// rho*_N = log2(1 + 1/alpha_rho_plus). Composition form; algebraically equal
// to the closed form, with fewer cancellation hazards.
inline double supremum_rho(double eps, std::int64_t N, double zeta, double tau) {
    return std::log2(1.0 + 1.0 / alpha_rho_plus(eps, N, zeta, tau));
}

// Age-limited capacity C_{tau,zeta} = log2(1 + zeta/tau).
inline double age_limited_capacity(double tau, double zeta) {
    if (!(tau > 0.0) || !(tau <= 1.0))
        throw std::invalid_argument("age_limited_capacity: tau must be in (0,1]");
    if (!(zeta > 0.0)) throw std::invalid_argument("age_limited_capacity: zeta must be > 0");
    return std::log2(1.0 + zeta / tau);
}

// phi(rho) = (alpha_rho*zeta - tau)/sqrt(alpha_rho^2*zeta + tau): positive
// below capacity, zero at it, negative above.
inline double phi(double rho, double tau, double zeta) {
    if (!(rho > 0.0)) throw std::invalid_argument("phi: rho must be > 0");
    if (!(tau > 0.0) || !(tau <= 1.0)) throw std::invalid_argument("phi: tau must be in (0,1]");
    if (!(zeta > 0.0)) throw std::invalid_argument("phi: zeta must be > 0");
    const double a = 1.0 / std::expm1(rho * 0.6931471805599453094);
    return (a * zeta - tau) / std::sqrt(a * a * zeta + tau);
}

// Minimum spectral efficiency for which the fixed-error curve exists:
// supremum_rho evaluated at tau = 1.
inline double rho_min(double eps, std::int64_t N, double zeta) {
    return supremum_rho(eps, N, zeta, 1.0);
}

// Attempt probability tau_eps at which the asymptotic error equals eps
// (minus-branch root of the induced quadratic in tau).
inline double tau_for_error(double eps, double rho, double zeta, std::int64_t N) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument("tau_for_error: eps must be in (0, 0.5)");
    if (!(rho > 0.0)) throw std::invalid_argument("tau_for_error: rho must be > 0");
    if (!(zeta > 0.0)) throw std::invalid_argument("tau_for_error: zeta must be > 0");
    if (rho < rho_min(eps, N, zeta) * (1.0 - 1e-12))
        throw std::domain_error("tau_for_error: below minimum spectral efficiency for this eps");
    const double a = 1.0 / std::expm1(rho * 0.6931471805599453094);
    const double q2 = q_inv(eps) * q_inv(eps);
    const double nd = static_cast<double>(N);
    const double az = a * zeta + q2 / (2.0 * nd);
    const double tau = az - std::sqrt(az * az + a * a * (q2 * zeta / nd - zeta * zeta));
    return std::min(tau, 1.0);
}

// One point of the fixed-error AoI curve. Finite N: Delta = 1/(tau_eps(1-eps)).
// Infinite N: the error-free limit, tau = alpha_rho*zeta clipped to (0,1] and
// Delta = 1/tau.
inline TradeoffPoint aoi_at_fixed_error(double eps, double rho, double zeta,
                                        std::optional<std::int64_t> N) {
    TradeoffPoint p;
    p.rho = rho;
    if (N.has_value()) {
        p.n_users = *N;
        p.tau_eps = tau_for_error(eps, rho, zeta, *N);
        p.delta = 1.0 / (p.tau_eps * (1.0 - eps));
    } else {
        if (!(rho > 0.0))
            throw std::invalid_argument("aoi_at_fixed_error: rho must be > 0");
        p.infinite_users = true;
        const double a = 1.0 / std::expm1(rho * 0.6931471805599453094);
        p.tau_eps = std::min(a * zeta, 1.0);
        p.delta = 1.0 / p.tau_eps;
    }
    return p;
}

}  // namespace aoi_mimo
