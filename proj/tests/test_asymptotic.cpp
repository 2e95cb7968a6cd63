#include <doctest.h>

#include <cmath>
#include <optional>

#include "aoi_mimo/asymptotic.hpp"
#include "aoi_mimo/special_functions.hpp"

using namespace aoi_mimo;

static SystemConfig clt_cfg(std::int64_t n, double zeta, double tau, double rho) {
    SystemConfig c;
    c.n_users = n;
    c.n_antennas = static_cast<std::int64_t>(std::llround(zeta * static_cast<double>(n)));
    c.attempt_prob = tau;
    c.spectral_eff = rho;
    c.tx_power = 1.0;
    c.noise_var = 0.0;  // the CLT expressions do not involve beta
    return c;
}

TEST_CASE("w_argument hand computation") {
    // N=100, zeta=0.5, tau=0.5, alpha=1:
    // w = 10 * (0.5 - 0.5) / sqrt(1*0.5 + 0.5) = 0
    CHECK(w_argument(100, 0.5, 0.5, 1.0) == doctest::Approx(0.0));
    // N=100, zeta=0.7, tau=0.5, alpha=1:
    // w = 10 * (0.5 - 0.7) / sqrt(0.7 + 0.5)
    const double expect = 10.0 * (0.5 - 0.7) / std::sqrt(1.2);
    CHECK(w_argument(100, 0.7, 0.5, 1.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(-1.8257418583505538).epsilon(1e-12));
}

TEST_CASE("asymptotic_pep sign convention") {
    // rho = 1 gives alpha_rho = 1 so operating load is tau versus zeta
    // light load (tau < alpha*zeta) drives the error to zero with N
    CHECK(asymptotic_pep(clt_cfg(1000000, 0.7, 0.3, 1.0)).p_e < 1e-10);
    // heavy load drowns the user in interference, error goes to one
    CHECK(asymptotic_pep(clt_cfg(1000000, 0.7, 0.9, 1.0)).p_e > 1.0 - 1e-10);
    // balanced point sits at one half regardless of N
    CHECK(asymptotic_pep(clt_cfg(10, 0.5, 0.5, 1.0)).p_e == doctest::Approx(0.5));
    CHECK(asymptotic_pep(clt_cfg(100000, 0.5, 0.5, 1.0)).p_e == doctest::Approx(0.5));
    CHECK(asymptotic_pep(clt_cfg(400, 0.7, 0.5, 1.0)).method == PepMethod::asymptotic);
}

TEST_CASE("asymptotic_aoi renewal law") {
    const SystemConfig c = clt_cfg(400, 0.7, 0.5, 1.0);
    const double pe = asymptotic_pep(c).p_e;
    const AoiEstimate a = asymptotic_aoi(c);
    CHECK_FALSE(a.infinite);
    CHECK(a.source == AoiSource::analytic_asymptotic);
    CHECK(a.delta == doctest::Approx(1.0 / (0.5 * (1.0 - pe))).epsilon(1e-13));
    // hopeless regime reports an unbounded age
    const AoiEstimate bad = asymptotic_aoi(clt_cfg(100000000, 0.2, 0.9, 1.0));
    CHECK(bad.infinite);
    CHECK(std::isinf(bad.delta));
}

TEST_CASE("alpha_rho_plus and supremum_rho fixed points") {
    const double eps = 0.01;
    const double q = q_inv(eps);
    const std::int64_t n = 10000;
    const double zeta = 0.7;
    for (double tau : {0.25, 0.5, 0.75, 1.0}) {
        const double ap = alpha_rho_plus(eps, n, zeta, tau);
        // by construction the asymptotic error at (tau, alpha_rho_plus) equals eps
        CHECK(w_argument(n, zeta, tau, ap) == doctest::Approx(-q).epsilon(1e-9));
        const double rho = supremum_rho(eps, n, zeta, tau);
        CHECK(rho == doctest::Approx(std::log2(1.0 + 1.0 / ap)).epsilon(1e-13));
        const SystemConfig c = clt_cfg(n, zeta, tau, rho);
        CHECK(asymptotic_pep(c).p_e == doctest::Approx(eps).epsilon(1e-8));
    }
}

TEST_CASE("alpha_rho_plus rejects the degenerate antenna regime") {
    // zeta <= q^2 / N leaves no feasible operating point
    const double eps = 0.01;
    const double q = q_inv(eps);
    const std::int64_t n = 4;
    CHECK(q * q / static_cast<double>(n) > 1.0);
    CHECK_THROWS_AS((void)alpha_rho_plus(eps, n, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS((void)alpha_rho_plus(0.0, 100, 0.7, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)alpha_rho_plus(0.01, 100, 0.7, 1.5), std::invalid_argument);
}

TEST_CASE("supremum_rho approaches the age-limited capacity as N grows") {
    const double zeta = 0.7, tau = 0.5, eps = 0.01;
    const double cap = age_limited_capacity(tau, zeta);
    CHECK(cap == doctest::Approx(1.2630344058337937).epsilon(1e-12));
    double prev_gap = 1e9;
    for (std::int64_t n : {1000, 10000, 100000, 1000000}) {
        const double gap = cap - supremum_rho(eps, n, zeta, tau);
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 5e-3);
}

TEST_CASE("supremum_rho monotone in its arguments") {
    const double eps = 0.01, zeta = 0.7;
    // higher attempt probability means more interference, lower rate
    double prev = 1e9;
    for (double tau : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double r = supremum_rho(eps, 100000, zeta, tau);
        CHECK(r < prev);
        prev = r;
    }
    prev = 0.0;
    for (double z : {0.3, 0.5, 0.9, 1.5}) {
        const double r = supremum_rho(eps, 100000, z, 0.5);
        CHECK(r > prev);
        prev = r;
    }
    prev = 0.0;
    for (std::int64_t n : {100, 1000, 10000}) {
        const double r = supremum_rho(eps, n, zeta, 0.5);
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("phi sign tracks the capacity boundary") {
    const double tau = 0.5, zeta = 0.7;
    const double cap = age_limited_capacity(tau, zeta);
    CHECK(phi(0.5 * cap, tau, zeta) > 0.0);
    CHECK(phi(cap, tau, zeta) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(phi(2.0 * cap, tau, zeta) < 0.0);
}

TEST_CASE("tau_for_error round trip and clipping") {
    const double eps = 0.01, zeta = 0.7;
    const std::int64_t n = 10000;
    const double rmin = rho_min(eps, n, zeta);
    CHECK(rmin > 0.0);
    for (double drho : {0.3, 1.0, 2.5}) {
        const double rho = rmin + drho;
        const double tau = tau_for_error(eps, rho, zeta, n);
        CHECK(tau > 0.0);
        CHECK(tau < 1.0);
        // at the returned tau the fixed-error rate equals rho again
        CHECK(supremum_rho(eps, n, zeta, tau) == doctest::Approx(rho).epsilon(1e-8));
        const SystemConfig c = clt_cfg(n, zeta, tau, rho);
        CHECK(asymptotic_pep(c).p_e == doctest::Approx(eps).epsilon(1e-6));
    }
    // at rho = rho_min the whole slot budget is needed
    CHECK(tau_for_error(eps, rmin, zeta, n) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS((void)tau_for_error(eps, 0.5 * rmin, zeta, n), std::domain_error);
}

TEST_CASE("aoi_at_fixed_error finite and infinite curves") {
    const double eps = 0.01, zeta = 0.7;
    SUBCASE("finite N") {
        const std::int64_t n = 10000;
        const double rho = rho_min(eps, n, zeta) + 0.5;
        const TradeoffPoint p = aoi_at_fixed_error(eps, rho, zeta, n);
        CHECK_FALSE(p.infinite_users);
        CHECK(p.n_users == n);
        CHECK(p.delta == doctest::Approx(1.0 / (p.tau_eps * (1.0 - eps))).epsilon(1e-13));
        // the finite curve minimum is 1/(1-eps), attained as rho -> rho_min
        const TradeoffPoint m = aoi_at_fixed_error(eps, rho_min(eps, n, zeta), zeta, n);
        CHECK(m.delta == doctest::Approx(1.0 / (1.0 - eps)).epsilon(1e-9));
    }
    SUBCASE("infinite N") {
        // tau = alpha * zeta clipped to one, age 1/tau with no error penalty
        const TradeoffPoint p = aoi_at_fixed_error(eps, 1.0, zeta, std::nullopt);
        CHECK(p.infinite_users);
        CHECK(p.tau_eps == doctest::Approx(0.7).epsilon(1e-13));
        CHECK(p.delta == doctest::Approx(1.0 / 0.7).epsilon(1e-13));
        // small rho saturates tau at one, age one
        const TradeoffPoint s = aoi_at_fixed_error(eps, 0.3, zeta, std::nullopt);
        CHECK(s.tau_eps == 1.0);
        CHECK(s.delta == 1.0);
        // the infinite curve passes through (log2(1 + zeta/tau), 1/tau)
        for (double tau : {0.25, 0.5, 1.0}) {
            const double rho = std::log2(1.0 + zeta / tau);
            const TradeoffPoint q = aoi_at_fixed_error(eps, rho, zeta, std::nullopt);
            CHECK(q.delta == doctest::Approx(1.0 / tau).epsilon(1e-9));
        }
    }
}

TEST_CASE("rho_min grows with N toward its limit and grows with zeta") {
    const double eps = 0.01;
    double prev = 0.0;
    for (std::int64_t n : {100, 1000, 10000, 100000}) {
        const double r = rho_min(eps, n, 0.7);
        CHECK(r > prev);
        prev = r;
    }
    CHECK(rho_min(eps, 10000, 0.3) < rho_min(eps, 10000, 0.9));
    // limiting value log2(1 + zeta) at tau = 1, approached from below
    CHECK(prev < std::log2(1.7));
    CHECK(rho_min(eps, 100000000, 0.7) == doctest::Approx(std::log2(1.7)).epsilon(1e-3));
}
