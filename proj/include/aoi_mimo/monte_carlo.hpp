#pragma once

// Ground-truth physical-layer and slot-level simulator: Rayleigh channels,
// MRC SINR outage, Bernoulli activity, and renewal-based AoI time averages.
// Every operation is deterministic given its RngSpec; trials and slots use
// one counter-based substream each, so results do not depend on how work is
// partitioned across threads.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "aoi_mimo/analytic_pep.hpp"
#include "aoi_mimo/asymptotic.hpp"
#include "aoi_mimo/parallel.hpp"
#include "aoi_mimo/rng.hpp"
#include "aoi_mimo/system_model.hpp"

namespace aoi_mimo {

struct ChannelRealization {
    std::int64_t n_users = 0;
    std::int64_t n_antennas = 0;
    std::vector<std::complex<double>> entries;  // row-major, user i at [i*M, (i+1)*M)

    std::complex<double>* user(std::int64_t i) { return entries.data() + i * n_antennas; }
    const std::complex<double>* user(std::int64_t i) const {
        return entries.data() + i * n_antennas;
    }
};

struct SlotOutcome {
    std::vector<bool> active_mask;
    std::vector<bool> decoded_mask;
    std::vector<double> sinr;  // defined only where active
};

// N*M i.i.d. unit-variance circular complex Gaussian entries.
inline ChannelRealization sample_channels(const RngSpec& spec, std::int64_t N,
                                          std::int64_t M) {
    if (N < 1 || M < 1)
        throw std::invalid_argument("sample_channels: N and M must be >= 1");
    ChannelRealization ch;
    ch.n_users = N;
    ch.n_antennas = M;
    ch.entries.resize(static_cast<std::size_t>(N * M));
    StreamRng rng(spec);
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    for (auto& e : ch.entries) {
        double re, im;
        rng.next_normal_pair(re, im);
        e = {re * inv_sqrt2, im * inv_sqrt2};
    }
    return ch;
}

// Per-user MRC SINR given the activity mask:
//   SINR_i = |h_i|^4 P / (|h_i|^2 sigma_w^2 + sum_{j active, j != i} |h_i^H h_j|^2 P).
// Noiseless with no interferers yields +inf.
inline std::vector<double> slot_sinr(const ChannelRealization& ch,
                                     const std::vector<bool>& active, double P,
                                     double noise_var) {
    if (static_cast<std::int64_t>(active.size()) != ch.n_users)
        throw std::invalid_argument("slot_sinr: mask size mismatch");
    const std::int64_t N = ch.n_users, M = ch.n_antennas;
    std::vector<double> sinr(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t i = 0; i < N; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        const auto* hi = ch.user(i);
        double norm2 = 0.0;
        for (std::int64_t m = 0; m < M; ++m) norm2 += std::norm(hi[m]);
        double interf = 0.0;
        for (std::int64_t j = 0; j < N; ++j) {
            if (j == i || !active[static_cast<std::size_t>(j)]) continue;
            const auto* hj = ch.user(j);
            std::complex<double> dot{0.0, 0.0};
            for (std::int64_t m = 0; m < M; ++m) dot += std::conj(hi[m]) * hj[m];
            interf += std::norm(dot);
        }
        const double denom = norm2 * noise_var + interf * P;
        sinr[static_cast<std::size_t>(i)] =
            denom > 0.0 ? norm2 * norm2 * P / denom
                        : std::numeric_limits<double>::infinity();
    }
    return sinr;
}

// Decode test of the outage definition: strict inequality, ties count as failure.
inline bool decodes(double rho, double sinr) { return rho < std::log2(1.0 + sinr); }

inline SlotOutcome evaluate_slot(const ChannelRealization& ch,
                                 const std::vector<bool>& active, double P,
                                 double noise_var, double rho) {
    SlotOutcome out;
    out.active_mask = active;
    out.sinr = slot_sinr(ch, active, P, noise_var);
    out.decoded_mask.resize(active.size(), false);
    for (std::size_t i = 0; i < active.size(); ++i)
        if (active[i]) out.decoded_mask[i] = decodes(rho, out.sinr[i]);
    return out;
}

namespace detail {

// log Binomial CDF term sum for small x: Pr{X <= x}, X ~ Binom(n, p).
inline double binom_cdf_small(std::int64_t x, std::int64_t n, double p) {
    if (x < 0) return 0.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return x >= n ? 1.0 : 0.0;
    const double lp = std::log(p), l1p = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double s = 0.0;
    for (std::int64_t j = 0; j <= x; ++j) {
        const double jd = static_cast<double>(j);
        s += std::exp(lgn - std::lgamma(jd + 1.0) -
                      std::lgamma(static_cast<double>(n - j) + 1.0) + jd * lp +
                      static_cast<double>(n - j) * l1p);
    }
    return std::min(s, 1.0);
}

// Clopper-Pearson interval for x successes out of n at confidence `conf`,
// by bisection on the exact binomial tails. Intended for small x (or small
// n - x, via complementation by the caller): the tail sum is short.
inline void clopper_pearson(std::int64_t x, std::int64_t n, double conf, double& lo,
                            double& hi) {
    const double a2 = 0.5 * (1.0 - conf);
    // upper: smallest p with Pr{X <= x} <= a2
    {
        double l = 0.0, u = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + u);
            (binom_cdf_small(x, n, m) > a2 ? l : u) = m;
        }
        hi = 0.5 * (l + u);
    }
    if (x == 0) {
        lo = 0.0;
    } else {
        // lower: largest p with Pr{X >= x} <= a2, i.e. 1 - CDF(x-1) <= a2
        double l = 0.0, u = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (l + u);
            (1.0 - binom_cdf_small(x - 1, n, m) < a2 ? l : u) = m;
        }
        lo = 0.5 * (l + u);
    }
}

}  // namespace detail

// Empirical PEP of a designated user, conditioned on that user transmitting
// (idle trials are excluded from the denominator). ci_halfwidth is the 3-sigma
// normal half-width, replaced by a Clopper-Pearson 99.7% bound when fewer than
// 50 failures (or fewer than 50 successes) were observed.
inline PepResult empirical_pep(const SystemConfig& cfg, std::int64_t trials,
                               const RngSpec& spec) {
    validate(cfg);
    if (trials < 1) throw std::invalid_argument("empirical_pep: trials must be >= 1");
    const std::int64_t N = cfg.n_users, M = cfg.n_antennas;
    const double tau = cfg.attempt_prob;
    const double rho = cfg.spectral_eff;
    const double P = cfg.tx_power, s2 = cfg.noise_var;
    constexpr double inv_sqrt2 = 0.7071067811865475244;

    std::int64_t conditioned = 0, failures = 0;
    std::mutex mtx;
    parallel_chunks(trials, [&](std::int64_t begin, std::int64_t end) {
        std::int64_t cond = 0, fail = 0;
        std::vector<std::complex<double>> h0(static_cast<std::size_t>(M));
        std::vector<std::uint8_t> act(static_cast<std::size_t>(N), 0);
        for (std::int64_t t = begin; t < end; ++t) {
            StreamRng rng(substream(spec, static_cast<std::uint64_t>(t)));
            if (!rng.next_bernoulli(tau)) continue;  // designated user idle
            ++cond;
            // other users' activity first, then channels, in fixed order
            for (std::int64_t j = 1; j < N; ++j)
                act[static_cast<std::size_t>(j)] = rng.next_bernoulli(tau) ? 1 : 0;
            double norm2 = 0.0;
            for (std::int64_t m = 0; m < M; ++m) {
                double re, im;
                rng.next_normal_pair(re, im);
                h0[static_cast<std::size_t>(m)] = {re * inv_sqrt2, im * inv_sqrt2};
                norm2 += re * re * 0.5 + im * im * 0.5;
            }
            double interf = 0.0;
            for (std::int64_t j = 1; j < N; ++j) {
                if (!act[static_cast<std::size_t>(j)]) continue;
                std::complex<double> dot{0.0, 0.0};
                for (std::int64_t m = 0; m < M; ++m) {
                    double re, im;
                    rng.next_normal_pair(re, im);
                    dot += std::conj(h0[static_cast<std::size_t>(m)]) *
                           std::complex<double>(re * inv_sqrt2, im * inv_sqrt2);
                }
                interf += std::norm(dot);
            }
            const double denom = norm2 * s2 + interf * P;
            const double sinr = denom > 0.0 ? norm2 * norm2 * P / denom
                                            : std::numeric_limits<double>::infinity();
            if (!decodes(rho, sinr)) ++fail;
        }
        std::lock_guard<std::mutex> lock(mtx);
        conditioned += cond;
        failures += fail;
    });

    if (conditioned == 0)
        throw std::runtime_error("empirical_pep: insufficient samples (no conditioning trials)");

    PepResult r;
    r.method = PepMethod::monte_carlo;
    const double phat = static_cast<double>(failures) / static_cast<double>(conditioned);
    r.p_e = phat;
    const std::int64_t successes = conditioned - failures;
    if (failures < 50 || successes < 50) {
        double lo, hi;
        detail::clopper_pearson(failures, conditioned, 0.997, lo, hi);
        r.ci_halfwidth = std::max(phat - lo, hi - phat);
    } else {
        r.ci_halfwidth = 3.0 * std::sqrt(phat * (1.0 - phat) / static_cast<double>(conditioned));
    }
    return r;
}

enum class AoiMode { physical, geometric };

// Exact integer area under the discrete age staircase for one user's success
// trace, by the renewal decomposition: base rectangle plus one triangular
// piece per inter-update interval (boundary pieces use the same formula with
// a virtual update at slot 0).
inline std::int64_t aoi_area_decomposed(const std::vector<std::uint8_t>& success) {
    std::int64_t area = static_cast<std::int64_t>(success.size());
    std::int64_t z = 0;
    for (const std::uint8_t s : success) {
        ++z;
        if (s) {
            area += z * (z - 1) / 2;
            z = 0;
        }
    }
    return area + z * (z - 1) / 2;
}

// Direct per-slot Riemann accumulation of the same staircase; the oracle the
// decomposition is checked against.
inline std::int64_t aoi_area_direct(const std::vector<std::uint8_t>& success) {
    std::int64_t area = 0, age = 1;
    for (const std::uint8_t s : success) {
        area += age;
        age = s ? 1 : age + 1;
    }
    return area;
}

// Per-user and network time-average AoI over a finite horizon. Physical mode
// redraws Rayleigh channels every slot and applies the full MRC decode test;
// geometric mode draws per-user success directly with probability `gamma`.
inline AoiEstimate simulate_aoi(const SystemConfig& cfg, std::int64_t horizon_slots,
                                const RngSpec& spec, AoiMode mode, double gamma = 0.0) {
    validate(cfg);
    if (horizon_slots < 1)
        throw std::invalid_argument("simulate_aoi: horizon_slots must be >= 1");
    if (mode == AoiMode::geometric && (!(gamma >= 0.0) || !(gamma <= 1.0)))
        throw std::invalid_argument("simulate_aoi: gamma must be in [0,1]");
    const std::int64_t N = cfg.n_users, M = cfg.n_antennas;
    const double tau = cfg.attempt_prob;
    const double rho = cfg.spectral_eff;
    const double P = cfg.tx_power, s2 = cfg.noise_var;
    constexpr double inv_sqrt2 = 0.7071067811865475244;

    // success[slot*N + user]; slots are independent so they fill in parallel
    std::vector<std::uint8_t> success(static_cast<std::size_t>(horizon_slots * N), 0);
    parallel_chunks(horizon_slots, [&](std::int64_t begin, std::int64_t end) {
        std::vector<std::complex<double>> h(static_cast<std::size_t>(N * M));
        std::vector<std::int64_t> act;
        act.reserve(static_cast<std::size_t>(N));
        for (std::int64_t slot = begin; slot < end; ++slot) {
            StreamRng rng(substream(spec, static_cast<std::uint64_t>(slot)));
            std::uint8_t* row = success.data() + slot * N;
            if (mode == AoiMode::geometric) {
                for (std::int64_t i = 0; i < N; ++i)
                    row[i] = rng.next_bernoulli(gamma) ? 1 : 0;
                continue;
            }
            act.clear();
            for (std::int64_t i = 0; i < N; ++i)
                if (rng.next_bernoulli(tau)) act.push_back(i);
            if (act.empty()) continue;
            for (const std::int64_t i : act) {
                auto* hi = h.data() + i * M;
                for (std::int64_t m = 0; m < M; ++m) {
                    double re, im;
                    rng.next_normal_pair(re, im);
                    hi[m] = {re * inv_sqrt2, im * inv_sqrt2};
                }
            }
            for (const std::int64_t i : act) {
                const auto* hi = h.data() + i * M;
                double norm2 = 0.0;
                for (std::int64_t m = 0; m < M; ++m) norm2 += std::norm(hi[m]);
                double interf = 0.0;
                for (const std::int64_t j : act) {
                    if (j == i) continue;
                    const auto* hj = h.data() + j * M;
                    std::complex<double> dot{0.0, 0.0};
                    for (std::int64_t m = 0; m < M; ++m) dot += std::conj(hi[m]) * hj[m];
                    interf += std::norm(dot);
                }
                const double denom = norm2 * s2 + interf * P;
                const double sinr = denom > 0.0
                                        ? norm2 * norm2 * P / denom
                                        : std::numeric_limits<double>::infinity();
                row[i] = decodes(rho, sinr) ? 1 : 0;
            }
        }
    });

    AoiEstimate est;
    est.source = AoiSource::simulated;
    est.per_user.emplace();
    est.per_user->reserve(static_cast<std::size_t>(N));
    double sum = 0.0;
    std::vector<std::uint8_t> trace(static_cast<std::size_t>(horizon_slots));
    for (std::int64_t i = 0; i < N; ++i) {
        for (std::int64_t slot = 0; slot < horizon_slots; ++slot)
            trace[static_cast<std::size_t>(slot)] =
                success[static_cast<std::size_t>(slot * N + i)];
        const double delta = static_cast<double>(aoi_area_decomposed(trace)) /
                             static_cast<double>(horizon_slots);
        est.per_user->push_back(delta);
        sum += delta;
    }
    est.delta = sum / static_cast<double>(N);
    return est;
}

// Network-wide average AoI: arithmetic mean of the per-user ages.
inline double empirical_network_aoi(const AoiEstimate& est) {
    if (!est.per_user || est.per_user->empty())
        throw std::invalid_argument("empirical_network_aoi: per-user ages required");
    double s = 0.0;
    for (const double d : *est.per_user) s += d;
    return s / static_cast<double>(est.per_user->size());
}

}  // namespace aoi_mimo
