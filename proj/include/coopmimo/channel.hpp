#ifndef COOPMIMO_CHANNEL_HPP
#define COOPMIMO_CHANNEL_HPP

#include "coopmimo/errors.hpp"
#include "coopmimo/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace coopmimo {

using cplx = std::complex<double>;

struct LinkPower {
    double value_db = 0.0;

    double linear() const noexcept { return std::pow(10.0, value_db / 10.0); }

    static LinkPower from_db(double db) noexcept { return LinkPower{db}; }
    static LinkPower from_linear(double lin)
    {
        if (!(lin > 0.0)) {
            throw DomainError("linear power must be positive");
        }
        return LinkPower{10.0 * std::log10(lin)};
    }
};

struct NoiseModel {
    double sigma2 = 1.0; // per complex dimension
};

inline constexpr double path_loss_offset_db = 32.4;
inline constexpr double path_loss_reference_m = 1.0;

// Received power after log-distance path loss: ps - (32.4 + 10 alpha log10(d / 1 m)).
inline LinkPower path_loss_received_power(double ps_db, double distance, double alpha)
{
    if (!(distance > 0.0)) {
        throw DomainError("path loss needs a positive distance");
    }
    return LinkPower{ps_db - (path_loss_offset_db + 10.0 * alpha * std::log10(distance / path_loss_reference_m))};
}

enum class TunnelModel { ramp, step };

inline constexpr double tunnel_entry_region_m = 50.0;
inline constexpr double tunnel_entry_loss_db = 15.0;
inline constexpr double tunnel_waveguide_db_per_m = 0.06;

// Excess loss for a receiver `depth` meters inside the tunnel. The entry region is either a
// linear ramp up to 15 dB (default) or a flat 15 dB step; past it the tunnel acts as a
// waveguide losing 0.06 dB/m.
inline double tunnel_excess_loss(double depth, TunnelModel model = TunnelModel::ramp)
{
    if (depth < 0.0) {
        throw DomainError("tunnel depth must be non-negative");
    }
    if (depth == 0.0) {
        return 0.0;
    }
    if (depth <= tunnel_entry_region_m) {
        return model == TunnelModel::ramp ? tunnel_entry_loss_db * depth / tunnel_entry_region_m
                                          : tunnel_entry_loss_db;
    }
    return tunnel_entry_loss_db + tunnel_waveguide_db_per_m * (depth - tunnel_entry_region_m);
}

// One circularly-symmetric complex Gaussian sample with E|h|^2 = variance.
template <class Engine>
cplx complex_gaussian(Engine& rng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline std::vector<cplx> draw_rayleigh(std::size_t count, std::uint64_t rng_seed)
{
    if (count == 0) {
        throw DomainError("draw_rayleigh needs count > 0");
    }
    SplitMix64 rng(rng_seed);
    std::vector<cplx> out(count);
    for (auto& h : out) {
        h = complex_gaussian(rng);
    }
    return out;
}

// sigma2 == 0 gives an exact zero vector (noiseless loopback).
inline std::vector<cplx> awgn(std::size_t dimension, double sigma2, std::uint64_t rng_seed)
{
    if (sigma2 < 0.0) {
        throw DomainError("noise variance must be non-negative");
    }
    std::vector<cplx> out(dimension, cplx{0.0, 0.0});
    if (sigma2 == 0.0) {
        return out;
    }
    SplitMix64 rng(rng_seed);
    for (auto& v : out) {
        v = complex_gaussian(rng, sigma2);
    }
    return out;
}

// Coefficients and receive powers of one codeword block, relays in selection order.
struct ChannelRealization {
    Eigen::VectorXcd h_source_relay; // (R)
    Eigen::VectorXcd h_source_dest;  // (M)
    Eigen::MatrixXcd h_relay_dest;   // (M, R)
    std::vector<LinkPower> p_source_relay; // (R)
    LinkPower p_source_dest;
    std::vector<LinkPower> p_relay_dest; // (R)

    std::size_t relays() const noexcept { return static_cast<std::size_t>(h_source_relay.size()); }
    std::size_t antennas() const noexcept { return static_cast<std::size_t>(h_source_dest.size()); }
};

} // namespace coopmimo

#endif // COOPMIMO_CHANNEL_HPP
