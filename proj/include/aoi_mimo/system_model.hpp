#pragma once

// System parameter space: the operating-point tuple, its validation, and
// the derived quantities every other module consumes. Also the key=value
// config-file reader used by the CLI.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace aoi_mimo {

struct SystemConfig {
    std::int64_t n_users = 1;       // N
    std::int64_t n_antennas = 1;    // M
    double attempt_prob = 1.0;      // tau, per-slot Bernoulli transmit probability
    double tx_power = 1.0;          // P [W]; only the ratio noise_var/tx_power matters
    double noise_var = 0.0;         // sigma_w^2 [W]
    double spectral_eff = 1.0;      // rho [bits/channel-use]
};

struct DerivedParams {
    double zeta = 0.0;       // M/N
    double alpha_rho = 0.0;  // 1/(2^rho - 1); meaningless when alpha_is_infinite
    bool alpha_is_infinite = false;  // rho == 0: "always decodable when alone"
    double beta = 0.0;       // noise_var / tx_power, inverse SNR
};

inline void validate(const SystemConfig& c) {
    if (c.n_users < 1)
        throw std::invalid_argument("n_users must be >= 1");
    if (c.n_antennas < 1)
        throw std::invalid_argument("n_antennas must be >= 1");
    if (!(c.attempt_prob > 0.0) || !(c.attempt_prob <= 1.0) || !std::isfinite(c.attempt_prob))
        throw std::invalid_argument("attempt_prob must be in (0,1]");
    if (!(c.tx_power > 0.0) || !std::isfinite(c.tx_power))
        throw std::invalid_argument("tx_power must be > 0");
    if (!(c.noise_var >= 0.0) || !std::isfinite(c.noise_var))
        throw std::invalid_argument("noise_var must be >= 0");
    if (!(c.spectral_eff >= 0.0) || !std::isfinite(c.spectral_eff))
        throw std::invalid_argument("spectral_eff must be >= 0");
}

inline DerivedParams derive(const SystemConfig& c) {
    validate(c);
    DerivedParams d;
    d.zeta = static_cast<double>(c.n_antennas) / static_cast<double>(c.n_users);
    d.beta = c.noise_var / c.tx_power;
    if (c.spectral_eff == 0.0) {
        d.alpha_is_infinite = true;
        d.alpha_rho = std::numeric_limits<double>::infinity();
    } else {
        d.alpha_rho = 1.0 / std::expm1(c.spectral_eff * 0.6931471805599453094);
    }
    return d;
}

// Flat key=value config file. Exactly the six SystemConfig keys are
// accepted; blank lines and '#' comments are skipped.
inline SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    SystemConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "n_users") c.n_users = std::stoll(val);
            else if (key == "n_antennas") c.n_antennas = std::stoll(val);
            else if (key == "attempt_prob") c.attempt_prob = std::stod(val);
            else if (key == "tx_power") c.tx_power = std::stod(val);
            else if (key == "noise_var") c.noise_var = std::stod(val);
            else if (key == "spectral_eff") c.spectral_eff = std::stod(val);
            else
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": bad value for '" + key + "'");
        }
    }
    return c;
}

}  // namespace aoi_mimo
