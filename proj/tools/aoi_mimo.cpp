// aoi-mimo: packet error probability, age of information, and age-limited
// capacity for slotted random access to a massive-MIMO base station, with a
// built-in Monte Carlo physical-layer cross-check.
//
// Exit codes: 0 success, 1 usage error, 2 numerical/validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoi_mimo/asymptotic.hpp"
#include "aoi_mimo/sweep.hpp"
#include "aoi_mimo/svg.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw CLI::ValidationError("bad list entry: " + tok);
            out.push_back(v);
        }
    }
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

// "start:stop:count" uniform grid
std::vector<double> parse_range(const std::string& s) {
    double lo, hi;
    int n;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
        throw CLI::ValidationError("expected start:stop:count, got " + s);
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

// Shared --config/--override plumbing; flags always win over file values.
struct ConfigArgs {
    std::string config_path;
    std::optional<std::int64_t> n_users, n_antennas;
    std::optional<double> attempt_prob, tx_power, noise_var, spectral_eff, snr_db;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("-N,--n-users", n_users, "total users N");
        cmd->add_option("-M,--n-antennas", n_antennas, "BS antennas M");
        cmd->add_option("--tau,--attempt-prob", attempt_prob, "attempt probability");
        cmd->add_option("--tx-power", tx_power, "transmit power P [W]");
        cmd->add_option("--noise-var", noise_var, "noise variance sigma_w^2 [W]");
        cmd->add_option("--rho,--spectral-eff", spectral_eff, "spectral efficiency rho");
        cmd->add_option("--snr-db", snr_db, "SNR in dB (sets noise_var = P/10^(snr/10))");
    }

    aoi_mimo::SystemConfig resolve() const {
        aoi_mimo::SystemConfig c;
        if (!config_path.empty()) c = aoi_mimo::load_config(config_path);
        if (n_users) c.n_users = *n_users;
        if (n_antennas) c.n_antennas = *n_antennas;
        if (attempt_prob) c.attempt_prob = *attempt_prob;
        if (tx_power) c.tx_power = *tx_power;
        if (noise_var) c.noise_var = *noise_var;
        if (spectral_eff) c.spectral_eff = *spectral_eff;
        if (snr_db) c.noise_var = c.tx_power * std::pow(10.0, -*snr_db / 10.0);
        return c;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PEP, AoI and age-limited capacity for massive-MIMO slotted random access"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand name

    std::uint64_t seed = 0;
    std::int64_t trials = 100000;
    std::string out_path, svg_path;
    bool svg_logy = false;
    app.add_option("--seed", seed, "RNG master seed")->capture_default_str();
    app.add_option("--trials", trials, "Monte Carlo trials / horizon slots")
        ->capture_default_str();
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--svg", svg_path, "also render an SVG plot to this path");
    app.add_flag("--svg-log-y", svg_logy, "log-scale y axis in the SVG");

    // pep
    auto* pep = app.add_subcommand("pep", "sweep packet error probability over a grid");
    ConfigArgs pep_cfg;
    pep_cfg.attach(pep);
    std::string axis_str = "rho", grid_str, methods_str = "exact,asymptotic";
    pep->add_option("--axis", axis_str, "sweep axis: rho|tau|n|zeta|snr")
        ->capture_default_str();
    pep->add_option("--grid", grid_str, "comma list or start:stop:count")->required();
    pep->add_option("--methods", methods_str, "subset of exact,asymptotic,mc")
        ->capture_default_str();

    // aoi-curve
    auto* aoi = app.add_subcommand("aoi-curve", "fixed-error AoI vs spectral efficiency");
    double aoi_eps = 0.01, aoi_zeta = 0.7;
    std::string aoi_nlist = "100,1000,10000,100000,inf", aoi_grid_str;
    aoi->add_option("--eps", aoi_eps, "target error probability")->capture_default_str();
    aoi->add_option("--zeta", aoi_zeta, "antenna/user ratio")->capture_default_str();
    aoi->add_option("--n-list", aoi_nlist, "comma list of N values, 'inf' allowed")
        ->capture_default_str();
    aoi->add_option("--rho-grid", aoi_grid_str,
                    "rho grid (comma list or start:stop:count); default 200 points "
                    "from rho_min to rho_min+3 per curve");

    // capacity
    auto* cap = app.add_subcommand("capacity", "age-limited capacity report");
    double cap_tau = 1.0, cap_zeta = 0.7;
    std::optional<double> cap_eps;
    std::optional<std::int64_t> cap_n;
    cap->add_option("--tau", cap_tau, "attempt probability")->capture_default_str();
    cap->add_option("--zeta", cap_zeta, "antenna/user ratio")->capture_default_str();
    cap->add_option("--eps", cap_eps, "also report rho*_N at this target error");
    cap->add_option("-N,--n-users", cap_n, "finite N for rho*_N");

    // ura-points
    auto* ura = app.add_subcommand("ura-points", "URA achievability bound points");
    std::string ura_m = "30,45,60", ura_ka = "50,75,100";
    ura->add_option("--m-list", ura_m, "antenna counts")->capture_default_str();
    ura->add_option("--ka-list", ura_ka, "active user counts")->capture_default_str();

    // validate
    auto* val = app.add_subcommand("validate", "run the cross-method validation oracles");
    ConfigArgs val_cfg;
    val_cfg.attach(val);
    double tol_scale = 1.0;
    val->add_option("--tolerance-scale", tol_scale,
                    "scale every tolerance (test fixture for the failure path)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 uses descriptive exit codes; collapse every usage error to 1
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const aoi_mimo::RngSpec rng{seed, 0};
        auto emit = [&](const aoi_mimo::Table& t, const std::string& group) {
            write_output(aoi_mimo::to_csv(t), out_path);
            if (!svg_path.empty()) {
                aoi_mimo::SvgStyle style;
                style.log_y = svg_logy;
                style.group_column = group;
                write_output(aoi_mimo::emit_svg(t, style), svg_path);
            }
        };

        if (pep->parsed()) {
            aoi_mimo::SweepSpec spec;
            spec.fixed = pep_cfg.resolve();
            spec.grid = grid_str.find(':') != std::string::npos ? parse_range(grid_str)
                                                                : parse_list(grid_str);
            if (axis_str == "rho") spec.axis = aoi_mimo::SweepAxis::rho;
            else if (axis_str == "tau") spec.axis = aoi_mimo::SweepAxis::tau;
            else if (axis_str == "n") spec.axis = aoi_mimo::SweepAxis::n;
            else if (axis_str == "zeta") spec.axis = aoi_mimo::SweepAxis::zeta;
            else if (axis_str == "snr") spec.axis = aoi_mimo::SweepAxis::snr;
            else throw CLI::ValidationError("unknown axis: " + axis_str);
            spec.use_exact = methods_str.find("exact") != std::string::npos;
            spec.use_asymptotic = methods_str.find("asymptotic") != std::string::npos;
            spec.use_monte_carlo = methods_str.find("mc") != std::string::npos;
            spec.mc_trials = trials;
            spec.rng = rng;
            emit(aoi_mimo::cmd_pep(spec), "");
        } else if (aoi->parsed()) {
            std::vector<std::int64_t> ns;
            for (const double v : parse_list(aoi_nlist))
                ns.push_back(std::isinf(v) ? 0 : static_cast<std::int64_t>(v));
            std::vector<double> grid;
            if (!aoi_grid_str.empty())
                grid = aoi_grid_str.find(':') != std::string::npos
                           ? parse_range(aoi_grid_str)
                           : parse_list(aoi_grid_str);
            emit(aoi_mimo::cmd_aoi_curve(aoi_eps, aoi_zeta, ns, grid), "n_users");
        } else if (cap->parsed()) {
            std::ostringstream rep;
            const double c = aoi_mimo::age_limited_capacity(cap_tau, cap_zeta);
            rep << "age_limited_capacity " << aoi_mimo::format_value(c) << '\n';
            if (cap_eps && cap_n) {
                const double r =
                    aoi_mimo::supremum_rho(*cap_eps, *cap_n, cap_zeta, cap_tau);
                rep << "supremum_rho " << aoi_mimo::format_value(r) << '\n';
                rep << "capacity_gap " << aoi_mimo::format_value(c - r) << '\n';
            }
            write_output(rep.str(), out_path);
        } else if (ura->parsed()) {
            std::vector<std::int64_t> ms, kas;
            for (const double v : parse_list(ura_m))
                ms.push_back(static_cast<std::int64_t>(v));
            for (const double v : parse_list(ura_ka))
                kas.push_back(static_cast<std::int64_t>(v));
            emit(aoi_mimo::cmd_ura_points(ms, kas), "");
        } else if (val->parsed()) {
            const aoi_mimo::ValidationReport rep =
                aoi_mimo::cmd_validate(val_cfg.resolve(), trials, rng, tol_scale);
            std::ostringstream out;
            for (const auto& c : rep.checks)
                out << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << " margin="
                    << aoi_mimo::format_value(c.margin) << '\n';
            out << (rep.all_pass ? "ALL_PASS" : "FAILED") << '\n';
            write_output(out.str(), out_path);
            if (!rep.all_pass) return 2;
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
