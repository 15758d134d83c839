#ifndef COOPMIMO_GEOMETRY_HPP
#define COOPMIMO_GEOMETRY_HPP

#include "coopmimo/errors.hpp"
#include "coopmimo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace coopmimo {

struct Position {
    double x = 0.0; // meters
    double y = 0.0; // meters

    friend bool operator==(const Position&, const Position&) = default;
};

inline double euclidean(Position a, Position b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct Relay {
    int id = 0;
    Position position;
};

struct RelaySet {
    std::vector<Relay> relays;

    std::size_t size() const noexcept { return relays.size(); }
};

// Straight MT path along the x-axis. `samples[i]` lies at along-track distance i * step
// from the start of the path; the tunnel occupies along-track [tunnel_start, tunnel_start + tunnel_length].
struct Trajectory {
    double length = 0.0;
    double step = 0.0;
    double tunnel_start = 0.0;
    double tunnel_length = 0.0;
    std::vector<Position> samples;

    double along_track(std::size_t index) const noexcept { return static_cast<double>(index) * step; }

    // Distance the MT has travelled into the tunnel, 0 when outside it.
    double tunnel_depth(std::size_t index) const noexcept
    {
        const double s = along_track(index);
        if (tunnel_length <= 0.0 || s < tunnel_start || s > tunnel_start + tunnel_length) {
            return 0.0;
        }
        return s - tunnel_start;
    }
};

struct SelectionResult {
    std::vector<int> relay_ids;
    std::vector<double> distances_to_mt; // empty when the selection is position-agnostic
};

struct GeometryConfig {
    std::size_t n_relays = 100;
    double cell_diameter = 1000.0;
    Position base_station{0.0, 0.0};
    double trajectory_length = 1000.0;
    double update_step = 10.0;
    double trajectory_offset = 0.0; // y of the path, relative to the BS
    double tunnel_start = 600.0;
    double tunnel_length = 200.0;
    double tunnel_half_width = 10.0; // corridor around the path kept free of relays

    void validate() const
    {
        if (n_relays == 0) {
            throw ConfigError("n_relays must be positive");
        }
        if (!(cell_diameter > 0.0) || !std::isfinite(cell_diameter)) {
            throw ConfigError("cell_diameter must be positive");
        }
        if (!(trajectory_length > 0.0) || !(update_step > 0.0)) {
            throw ConfigError("trajectory length and update step must be positive");
        }
        if (tunnel_length < 0.0 || tunnel_start < 0.0 || tunnel_start + tunnel_length > trajectory_length) {
            throw ConfigError("tunnel interval must lie inside [0, trajectory_length]");
        }
        if (tunnel_half_width < 0.0) {
            throw ConfigError("tunnel_half_width must be non-negative");
        }
        if (tunnel_length > 0.0 && tunnel_half_width >= cell_diameter / 2.0) {
            throw ConfigError("tunnel corridor covers the whole cell");
        }
    }
};

// Relay-to-MT distance seen from the BS: law of cosines on (d(BS,R), d(BS,MT), angle at the BS).
inline double distance_relay_to_mt(Position bs, Position relay, Position mt) noexcept
{
    const double d_br = euclidean(bs, relay);
    const double d_bm = euclidean(bs, mt);
    if (d_br == 0.0) {
        return d_bm;
    }
    if (d_bm == 0.0) {
        return d_br;
    }
    const double dot = (relay.x - bs.x) * (mt.x - bs.x) + (relay.y - bs.y) * (mt.y - bs.y);
    const double cos_theta = std::clamp(dot / (d_br * d_bm), -1.0, 1.0);
    const double sq = d_br * d_br + d_bm * d_bm - 2.0 * d_bm * d_br * cos_theta;
    return std::sqrt(std::max(sq, 0.0));
}

// Nearest R relays to the MT, ascending by distance, ties broken by lower id.
inline SelectionResult select_relays_pi(const RelaySet& relays, Position bs, Position mt, std::size_t count)
{
    if (count > relays.size()) {
        throw ConfigError("cannot select " + std::to_string(count) + " relays out of " +
                          std::to_string(relays.size()));
    }
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(relays.size());
    for (const auto& r : relays.relays) {
        ranked.emplace_back(distance_relay_to_mt(bs, r.position, mt), r.id);
    }
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count), ranked.end());

    SelectionResult out;
    out.relay_ids.reserve(count);
    out.distances_to_mt.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.distances_to_mt.push_back(ranked[i].first);
        out.relay_ids.push_back(ranked[i].second);
    }
    return out;
}

// R distinct relays uniformly without replacement (partial Fisher-Yates), in draw order.
inline SelectionResult select_relays_random(const RelaySet& relays, std::size_t count, std::uint64_t rng_seed)
{
    if (count > relays.size()) {
        throw ConfigError("cannot select " + std::to_string(count) + " relays out of " +
                          std::to_string(relays.size()));
    }
    std::vector<std::size_t> idx(relays.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    SplitMix64 rng(rng_seed);
    SelectionResult out;
    out.relay_ids.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
        out.relay_ids.push_back(relays.relays[idx[i]].id);
    }
    return out;
}

inline bool inside_tunnel_corridor(const GeometryConfig& cfg, Position p) noexcept
{
    if (cfg.tunnel_length <= 0.0) {
        return false;
    }
    const double x0 = cfg.base_station.x - cfg.trajectory_length / 2.0 + cfg.tunnel_start;
    const double y0 = cfg.base_station.y + cfg.trajectory_offset;
    return p.x >= x0 && p.x <= x0 + cfg.tunnel_length && std::abs(p.y - y0) <= cfg.tunnel_half_width;
}

// Relays uniform over the disc (rejection sampling, re-drawn when they land in the tunnel
// corridor) plus the MT path centred on the BS. Relay ids are 0..N-1.
inline std::pair<RelaySet, Trajectory> sample_trajectory(const GeometryConfig& cfg, std::uint64_t rng_seed)
{
    cfg.validate();
    const double radius = cfg.cell_diameter / 2.0;

    SplitMix64 rng(rng_seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    RelaySet relays;
    relays.relays.reserve(cfg.n_relays);
    while (relays.size() < cfg.n_relays) {
        const double u = unit(rng);
        const double v = unit(rng);
        if (u * u + v * v > 1.0) {
            continue;
        }
        const Position p{cfg.base_station.x + radius * u, cfg.base_station.y + radius * v};
        if (inside_tunnel_corridor(cfg, p)) {
            continue;
        }
        relays.relays.push_back({static_cast<int>(relays.size()), p});
    }

    Trajectory traj;
    traj.length = cfg.trajectory_length;
    traj.step = cfg.update_step;
    traj.tunnel_start = cfg.tunnel_start;
    traj.tunnel_length = cfg.tunnel_length;
    const auto n_steps = static_cast<std::size_t>(std::floor(cfg.trajectory_length / cfg.update_step + 1e-9));
    const double x0 = cfg.base_station.x - cfg.trajectory_length / 2.0;
    const double y0 = cfg.base_station.y + cfg.trajectory_offset;
    traj.samples.reserve(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        traj.samples.push_back({x0 + static_cast<double>(i) * cfg.update_step, y0});
    }
    return {std::move(relays), std::move(traj)};
}

} // namespace coopmimo

#endif // COOPMIMO_GEOMETRY_HPP
