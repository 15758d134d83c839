#ifndef COOPMIMO_CONFIG_HPP
#define COOPMIMO_CONFIG_HPP

#include "coopmimo/channel.hpp"
#include "coopmimo/conv_code.hpp"
#include "coopmimo/errors.hpp"
#include "coopmimo/geometry.hpp"
#include "coopmimo/qam.hpp"
#include "coopmimo/receiver.hpp"
#include "coopmimo/stbc.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coopmimo {

enum class Strategy { pi, random };

inline std::string_view to_string(Strategy s) noexcept { return s == Strategy::pi ? "pi" : "random"; }

inline Strategy strategy_from_string(std::string_view s)
{
    if (s == "pi") {
        return Strategy::pi;
    }
    if (s == "random" || s == "rs") {
        return Strategy::random;
    }
    throw ConfigError("unknown selection strategy '" + std::string(s) + "'");
}

// Modulation and code rate that give 4 b/s/Hz with each scheme.
struct EtaRow {
    Modulation modulation;
    CodeRate rate;
};

inline EtaRow eta4_row(SchemeKind kind) noexcept
{
    switch (kind) {
    case SchemeKind::alamouti:
        return {Modulation::qam64, CodeRate::two_thirds};
    case SchemeKind::golden:
    case SchemeKind::dlst:
        return {Modulation::qam16, CodeRate::half};
    }
    return {Modulation::qam16, CodeRate::half};
}

inline double spectral_efficiency(const StbcScheme& scheme, Modulation m, CodeRate r)
{
    return scheme.rate() * Constellation(m).bits_per_symbol() * rate_value(r);
}

// All parameters of one measurement point.
//
// Config file format: one `key = value` per line, `#` starts a comment, blank lines
// ignored. Keys are the member names below (plus `sigma2_db`); unknown keys are errors.
struct ScenarioConfig {
    GeometryConfig geometry;
    std::size_t rx_antennas = 2;
    std::optional<std::size_t> relays; // when set, must match the scheme
    double ps_db = 0.0;
    double sigma2 = 3.1622776601683794e-14; // -135 dB: PI/DLST at N = 100 sits mid-waterfall
    double alpha = 3.5;
    TunnelModel tunnel_model = TunnelModel::ramp;
    std::string scheme = "dlst";
    std::optional<Modulation> modulation; // default: the scheme's 4 b/s/Hz row
    std::optional<CodeRate> code_rate;
    Strategy strategy = Strategy::pi;
    unsigned iterations = 3;
    std::size_t frames = 20000;
    std::size_t blocks_per_frame = 4;
    std::uint64_t seed = 1;
    bool eta_check = true;
    NoiseMode noise_mode = NoiseMode::paper_literal;
    FeedbackMode feedback = FeedbackMode::a_posteriori;
    unsigned workers = 1;

    StbcScheme stbc() const { return StbcScheme::from_name(scheme); }
    Modulation resolved_modulation() const { return modulation.value_or(eta4_row(stbc().kind()).modulation); }
    CodeRate resolved_rate() const { return code_rate.value_or(eta4_row(stbc().kind()).rate); }

    void validate() const
    {
        geometry.validate();
        const StbcScheme s = stbc();
        if (relays && *relays != s.relays()) {
            throw ConfigError("scheme " + s.name() + " needs R = " + std::to_string(s.relays()) + ", config has " +
                              std::to_string(*relays));
        }
        if (s.relays() > geometry.n_relays) {
            throw ConfigError("scheme " + s.name() + " needs " + std::to_string(s.relays()) +
                              " relays but only " + std::to_string(geometry.n_relays) + " exist");
        }
        if (rx_antennas == 0) {
            throw ConfigError("rx_antennas must be positive");
        }
        if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
            throw ConfigError("sigma2 must be finite and non-negative");
        }
        if (!std::isfinite(ps_db) || !(alpha > 0.0)) {
            throw ConfigError("ps_db must be finite and alpha positive");
        }
        if (iterations < 1 || iterations > 8) {
            throw ConfigError("iterations must be in 1..8");
        }
        if (frames == 0) {
            throw ConfigError("frames must be positive");
        }
        if (workers == 0) {
            throw ConfigError("workers must be positive");
        }
        if (eta_check) {
            const double eta = spectral_efficiency(s, resolved_modulation(), resolved_rate());
            if (std::abs(eta - 4.0) > 1e-9) {
                throw ConfigError("scheme " + s.name() + " with " + std::string(to_string(resolved_modulation())) +
                                  " at rate " + std::string(to_string(resolved_rate())) + " gives eta = " +
                                  std::to_string(eta) + " b/s/Hz, not 4 (set eta_check = false to allow)");
            }
        }
        FrameLayout::make(s, resolved_modulation(), resolved_rate(), blocks_per_frame, 0);
    }

    void set(std::string_view key, std::string_view value);
    std::vector<std::pair<std::string, std::string>> to_pairs() const;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view key, std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    }
    return out;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v)
{
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

inline bool parse_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError("'" + std::string(key) + "' expects a boolean, got '" + std::string(v) + "'");
}

inline std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

inline void ScenarioConfig::set(std::string_view key, std::string_view raw)
{
    const std::string v = detail::trim(raw);
    using detail::parse_double;
    using detail::parse_int;
    if (key == "n_relays") {
        geometry.n_relays = parse_int<std::size_t>(key, v);
    } else if (key == "cell_diameter") {
        geometry.cell_diameter = parse_double(key, v);
    } else if (key == "trajectory_length") {
        geometry.trajectory_length = parse_double(key, v);
    } else if (key == "update_step") {
        geometry.update_step = parse_double(key, v);
    } else if (key == "trajectory_offset") {
        geometry.trajectory_offset = parse_double(key, v);
    } else if (key == "tunnel_start") {
        geometry.tunnel_start = parse_double(key, v);
    } else if (key == "tunnel_length") {
        geometry.tunnel_length = parse_double(key, v);
    } else if (key == "tunnel_half_width") {
        geometry.tunnel_half_width = parse_double(key, v);
    } else if (key == "tunnel_model") {
        if (v == "ramp") {
            tunnel_model = TunnelModel::ramp;
        } else if (v == "step") {
            tunnel_model = TunnelModel::step;
        } else {
            throw ConfigError("tunnel_model must be ramp or step");
        }
    } else if (key == "rx_antennas") {
        rx_antennas = parse_int<std::size_t>(key, v);
    } else if (key == "relays") {
        relays = parse_int<std::size_t>(key, v);
    } else if (key == "ps_db") {
        ps_db = parse_double(key, v);
    } else if (key == "sigma2") {
        sigma2 = parse_double(key, v);
    } else if (key == "sigma2_db") {
        sigma2 = std::pow(10.0, parse_double(key, v) / 10.0);
    } else if (key == "alpha") {
        alpha = parse_double(key, v);
    } else if (key == "scheme") {
        StbcScheme::from_name(v);
        scheme = v;
    } else if (key == "modulation") {
        if (v == "auto") {
            modulation.reset();
        } else {
            modulation = modulation_from_string(v);
        }
    } else if (key == "code_rate") {
        if (v == "auto") {
            code_rate.reset();
        } else {
            code_rate = code_rate_from_string(v);
        }
    } else if (key == "strategy") {
        strategy = strategy_from_string(v);
    } else if (key == "iterations") {
        iterations = parse_int<unsigned>(key, v);
    } else if (key == "frames") {
        frames = parse_int<std::size_t>(key, v);
    } else if (key == "blocks_per_frame") {
        blocks_per_frame = parse_int<std::size_t>(key, v);
    } else if (key == "seed") {
        seed = parse_int<std::uint64_t>(key, v);
    } else if (key == "eta_check") {
        eta_check = detail::parse_bool(key, v);
    } else if (key == "noise_mode") {
        if (v == "paper" || v == "scalar") {
            noise_mode = NoiseMode::paper_literal;
        } else if (v == "full") {
            noise_mode = NoiseMode::full_covariance;
        } else {
            throw ConfigError("noise_mode must be scalar or full");
        }
    } else if (key == "feedback") {
        if (v == "app") {
            feedback = FeedbackMode::a_posteriori;
        } else if (v == "extrinsic") {
            feedback = FeedbackMode::extrinsic;
        } else {
            throw ConfigError("feedback must be app or extrinsic");
        }
    } else if (key == "workers") {
        workers = parse_int<unsigned>(key, v);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

inline std::vector<std::pair<std::string, std::string>> ScenarioConfig::to_pairs() const
{
    using detail::format_double;
    return {
        {"n_relays", std::to_string(geometry.n_relays)},
        {"cell_diameter", format_double(geometry.cell_diameter)},
        {"trajectory_length", format_double(geometry.trajectory_length)},
        {"update_step", format_double(geometry.update_step)},
        {"trajectory_offset", format_double(geometry.trajectory_offset)},
        {"tunnel_start", format_double(geometry.tunnel_start)},
        {"tunnel_length", format_double(geometry.tunnel_length)},
        {"tunnel_half_width", format_double(geometry.tunnel_half_width)},
        {"tunnel_model", tunnel_model == TunnelModel::ramp ? "ramp" : "step"},
        {"rx_antennas", std::to_string(rx_antennas)},
        {"relays", relays ? std::to_string(*relays) : std::to_string(stbc().relays())},
        {"ps_db", format_double(ps_db)},
        {"sigma2", format_double(sigma2)},
        {"alpha", format_double(alpha)},
        {"scheme", scheme},
        {"modulation", std::string(to_string(resolved_modulation()))},
        {"code_rate", std::string(to_string(resolved_rate()))},
        {"strategy", std::string(to_string(strategy))},
        {"iterations", std::to_string(iterations)},
        {"frames", std::to_string(frames)},
        {"blocks_per_frame", std::to_string(blocks_per_frame)},
        {"seed", std::to_string(seed)},
        {"eta_check", eta_check ? "true" : "false"},
        {"noise_mode", noise_mode == NoiseMode::paper_literal ? "scalar" : "full"},
        {"feedback", feedback == FeedbackMode::a_posteriori ? "app" : "extrinsic"},
        {"workers", std::to_string(workers)},
    };
}

inline void apply_config_text(ScenarioConfig& cfg, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string t = detail::trim(line);
        if (t.empty()) {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        cfg.set(detail::trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
    }
}

inline ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {})
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    apply_config_text(base, text.str());
    return base;
}

} // namespace coopmimo

#endif // COOPMIMO_CONFIG_HPP
