#pragma once

// Sweep harness behind the CLI: grid evaluation across methods, CSV emission
// and re-parsing, and the end-to-end cross-method validation report.
// CSV schema: snake_case header row, floats at 12 significant digits, fixed
// sentinel "NA" for points where a method is undefined or failed.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoi_mimo/analytic_pep.hpp"
#include "aoi_mimo/asymptotic.hpp"
#include "aoi_mimo/monte_carlo.hpp"
#include "aoi_mimo/system_model.hpp"

namespace aoi_mimo {

inline constexpr const char* kCsvSentinel = "NA";

using Cell = std::optional<double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string to_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << (row[c] ? format_value(*row[c]) : kCsvSentinel);
        }
        out << '\n';
    }
    return out.str();
}

inline Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty input");
    std::istringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) t.columns.push_back(tok);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Cell> row;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) {
            if (tok == kCsvSentinel)
                row.emplace_back(std::nullopt);
            else
                row.emplace_back(std::strtod(tok.c_str(), nullptr));
        }
        if (row.size() != t.columns.size())
            throw std::runtime_error("parse_csv: ragged row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

enum class SweepAxis { rho, tau, n, zeta, snr };

struct SweepSpec {
    SweepAxis axis = SweepAxis::rho;
    std::vector<double> grid;
    SystemConfig fixed;
    bool use_exact = true;
    bool use_asymptotic = true;
    bool use_monte_carlo = false;
    std::int64_t mc_trials = 100000;
    RngSpec rng;
};

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::rho: return "rho";
        case SweepAxis::tau: return "tau";
        case SweepAxis::n: return "n_users";
        case SweepAxis::zeta: return "zeta";
        case SweepAxis::snr: return "snr_db";
    }
    return "?";
}

// Instantiate the config at one grid point. N- and zeta-sweeps hold the
// antenna/user ratio of the template fixed and round M to an integer.
inline SystemConfig config_at(const SweepSpec& spec, double v) {
    SystemConfig c = spec.fixed;
    switch (spec.axis) {
        case SweepAxis::rho:
            c.spectral_eff = v;
            break;
        case SweepAxis::tau:
            c.attempt_prob = v;
            break;
        case SweepAxis::n: {
            const double zeta = static_cast<double>(spec.fixed.n_antennas) /
                                static_cast<double>(spec.fixed.n_users);
            c.n_users = static_cast<std::int64_t>(v);
            c.n_antennas = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(std::llround(zeta * v)));
            break;
        }
        case SweepAxis::zeta:
            c.n_antennas = std::max<std::int64_t>(
                1, static_cast<std::int64_t>(
                       std::llround(v * static_cast<double>(c.n_users))));
            break;
        case SweepAxis::snr:
            c.noise_var = c.tx_power * std::pow(10.0, -v / 10.0);
            break;
    }
    return c;
}

inline void validate_sweep(const SweepSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("sweep: grid must be non-empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
        if (!((spec.grid[i] > spec.grid[i - 1]) == (spec.grid[1] > spec.grid[0])) ||
            spec.grid[i] == spec.grid[i - 1])
            throw std::invalid_argument("sweep: grid must be strictly monotone");
    }
    if (!spec.use_exact && !spec.use_asymptotic && !spec.use_monte_carlo)
        throw std::invalid_argument("sweep: at least one method required");
    if (spec.mc_trials < 1) throw std::invalid_argument("sweep: mc_trials must be >= 1");
}

// PEP sweep: one row per grid point; per-point errors become NA cells.
inline Table cmd_pep(const SweepSpec& spec) {
    validate_sweep(spec);
    Table t;
    t.columns.push_back(axis_name(spec.axis));
    if (spec.use_exact) {
        t.columns.push_back("pe_exact");
        t.columns.push_back("truncation_bound");
    }
    if (spec.use_asymptotic) t.columns.push_back("pe_asymptotic");
    if (spec.use_monte_carlo) {
        t.columns.push_back("pe_mc");
        t.columns.push_back("mc_ci_halfwidth");
    }
    std::uint64_t point = 0;
    for (const double v : spec.grid) {
        std::vector<Cell> row;
        row.emplace_back(v);
        const SystemConfig c = config_at(spec, v);
        if (spec.use_exact) {
            try {
                const PepResult r = exact_pep(c);
                row.emplace_back(r.p_e);
                row.emplace_back(r.truncation_bound);
            } catch (const std::exception&) {
                row.emplace_back(std::nullopt);
                row.emplace_back(std::nullopt);
            }
        }
        if (spec.use_asymptotic) {
            try {
                row.emplace_back(asymptotic_pep(c).p_e);
            } catch (const std::exception&) {
                row.emplace_back(std::nullopt);
            }
        }
        if (spec.use_monte_carlo) {
            try {
                const PepResult r =
                    empirical_pep(c, spec.mc_trials, substream(spec.rng, point));
                row.emplace_back(r.p_e);
                row.emplace_back(r.ci_halfwidth);
            } catch (const std::exception&) {
                row.emplace_back(std::nullopt);
                row.emplace_back(std::nullopt);
            }
        }
        t.rows.push_back(std::move(row));
        ++point;
    }
    return t;
}

// Fixed-error AoI curves (one row per (curve, rho) point). n_list entries of
// 0 encode the infinite-user curve; its n_users cell is emitted as +inf.
// An empty rho_grid selects the default per-curve grid: 200 uniform points
// from rho_min to rho_min + 3 (finite N), or from 0.05 to 3 (infinite N).
inline Table cmd_aoi_curve(double eps, double zeta,
                           const std::vector<std::int64_t>& n_list,
                           std::vector<double> rho_grid = {}) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw std::invalid_argument("aoi_curve: eps must be in (0, 0.5)");
    if (!(zeta > 0.0)) throw std::invalid_argument("aoi_curve: zeta must be > 0");
    if (n_list.empty()) throw std::invalid_argument("aoi_curve: n_list must be non-empty");
    Table t;
    t.columns = {"n_users", "rho", "tau_eps", "delta"};
    for (const std::int64_t n : n_list) {
        std::vector<double> grid = rho_grid;
        if (grid.empty()) {
            const double lo = n > 0 ? rho_min(eps, n, zeta) : 0.05;
            for (int i = 0; i < 200; ++i) grid.push_back(lo + 3.0 * i / 199.0);
        }
        for (const double rho : grid) {
            std::vector<Cell> row;
            row.emplace_back(n > 0 ? static_cast<double>(n)
                                   : std::numeric_limits<double>::infinity());
            row.emplace_back(rho);
            try {
                const TradeoffPoint p = aoi_at_fixed_error(
                    eps, rho, zeta,
                    n > 0 ? std::optional<std::int64_t>(n) : std::nullopt);
                row.emplace_back(p.tau_eps);
                row.emplace_back(p.delta);
            } catch (const std::exception&) {
                row.emplace_back(std::nullopt);
                row.emplace_back(std::nullopt);
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

// Fig. 3-style achievability bound points, log2(1 + M/Ka).
inline Table cmd_ura_points(const std::vector<std::int64_t>& m_list,
                            const std::vector<std::int64_t>& ka_list) {
    if (m_list.size() != ka_list.size())
        throw std::invalid_argument("ura_points: lists must have equal length");
    Table t;
    t.columns = {"m_antennas", "k_active", "spectral_eff"};
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        t.rows.push_back({Cell(static_cast<double>(m_list[i])),
                          Cell(static_cast<double>(ka_list[i])),
                          Cell(std::log2(1.0 + static_cast<double>(m_list[i]) /
                                                   static_cast<double>(ka_list[i])))});
    }
    return t;
}

struct ValidationCheck {
    std::string name;
    double margin = 0.0;  // >= 0 means pass
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass = true;
};

// Cross-method oracle run: exact vs Monte Carlo PEP, asymptotic vs exact,
// the renewal AoI law, the physical-mode AoI composition, and the exact
// integer identity of the two area accumulations. tolerance_scale < 1
// tightens every tolerance (used to exercise the failure path).
inline ValidationReport cmd_validate(const SystemConfig& cfg, std::int64_t trials,
                                     const RngSpec& rng, double tolerance_scale = 1.0) {
    validate(cfg);
    ValidationReport rep;
    auto add = [&rep](const std::string& name, double margin) {
        rep.checks.push_back({name, margin, margin >= 0.0});
        rep.all_pass = rep.all_pass && margin >= 0.0;
    };

    const PepResult ex = exact_pep(cfg);
    const PepResult mc = empirical_pep(cfg, trials, rng);
    add("exact_vs_mc_pep_within_ci",
        mc.ci_halfwidth * tolerance_scale - std::fabs(ex.p_e - mc.p_e));

    const PepResult as = asymptotic_pep(cfg);
    add("asymptotic_vs_exact_clt_gap",
        2.0 * tolerance_scale / std::sqrt(static_cast<double>(cfg.n_users)) -
            std::fabs(ex.p_e - as.p_e));

    const double gamma = cfg.attempt_prob * (1.0 - ex.p_e);
    const std::int64_t horizon = std::max<std::int64_t>(trials, 10000);
    const AoiEstimate geo =
        simulate_aoi(cfg, horizon, substream(rng, 1), AoiMode::geometric, gamma);
    add("geometric_aoi_renewal_law",
        0.02 * tolerance_scale / gamma - std::fabs(geo.delta - 1.0 / gamma));

    const AoiEstimate phys = simulate_aoi(cfg, horizon, substream(rng, 2), AoiMode::physical);
    add("physical_aoi_vs_exact_pep",
        0.02 * tolerance_scale / gamma - std::fabs(phys.delta - 1.0 / gamma));

    // integer identity on a pseudo-random trace
    StreamRng r(substream(rng, 3));
    std::vector<std::uint8_t> trace(100000);
    for (auto& s : trace) s = r.next_bernoulli(0.3) ? 1 : 0;
    add("aoi_area_decomposition_identity",
        aoi_area_decomposed(trace) == aoi_area_direct(trace) ? 0.0 : -1.0);

    return rep;
}

}  // namespace aoi_mimo
