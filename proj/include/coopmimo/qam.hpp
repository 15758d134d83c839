#ifndef COOPMIMO_QAM_HPP
#define COOPMIMO_QAM_HPP

#include "coopmimo/conv_code.hpp"
#include "coopmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coopmimo {

enum class Modulation { qpsk, qam16, qam64 };

inline std::string_view to_string(Modulation m) noexcept
{
    switch (m) {
    case Modulation::qpsk:
        return "qpsk";
    case Modulation::qam16:
        return "16qam";
    case Modulation::qam64:
        return "64qam";
    }
    return "?";
}

inline Modulation modulation_from_string(std::string_view s)
{
    if (s == "qpsk" || s == "4qam") {
        return Modulation::qpsk;
    }
    if (s == "16qam" || s == "qam16" || s == "16-qam") {
        return Modulation::qam16;
    }
    if (s == "64qam" || s == "qam64" || s == "64-qam") {
        return Modulation::qam64;
    }
    throw ConfigError("unknown modulation '" + std::string(s) + "'");
}

inline constexpr double llr_clamp = 30.0;

inline double clamp_llr(double l) noexcept { return std::clamp(l, -llr_clamp, llr_clamp); }

// Square Gray-labelled QAM with unit average energy.
//
// A label of m bits is split in two halves: the first m/2 bits drive the in-phase axis and
// the last m/2 the quadrature axis. On each axis the half-label is read as a Gray code g,
// converted to its binary index i, and mapped to the PAM level (L - 1) - 2 i, so the
// all-zero label sits at the top-right corner. For the three supported orders:
//
//   bits per axis | labels (MSB first) -> level, before scaling
//   1             | 0 -> +1, 1 -> -1
//   2             | 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3
//   3             | 000 -> +7, 001 -> +5, 011 -> +3, 010 -> +1, 110 -> -1, 111 -> -3, 101 -> -5, 100 -> -7
//
// Levels are scaled by 1/sqrt(2 (L^2 - 1) / 3) so E|X|^2 = 1.
class Constellation {
public:
    explicit Constellation(Modulation m) : modulation_(m)
    {
        switch (m) {
        case Modulation::qpsk:
            bits_ = 2;
            break;
        case Modulation::qam16:
            bits_ = 4;
            break;
        case Modulation::qam64:
            bits_ = 6;
            break;
        }
        const unsigned half = bits_ / 2;
        const unsigned levels = 1u << half;
        const double scale = 1.0 / std::sqrt(2.0 * (static_cast<double>(levels * levels) - 1.0) / 3.0);
        auto level = [&](unsigned gray) {
            unsigned bin = gray;
            for (unsigned s = gray >> 1; s != 0; s >>= 1) {
                bin ^= s;
            }
            return (static_cast<double>(levels) - 1.0 - 2.0 * bin) * scale;
        };
        points_.resize(std::size_t{1} << bits_);
        for (unsigned label = 0; label < points_.size(); ++label) {
            const unsigned i_half = label >> half;
            const unsigned q_half = label & (levels - 1);
            points_[label] = {level(i_half), level(q_half)};
        }
    }

    Modulation modulation() const noexcept { return modulation_; }
    unsigned bits_per_symbol() const noexcept { return bits_; }
    std::size_t order() const noexcept { return points_.size(); }

    // Point for a label whose MSB is the first bit of the group.
    std::complex<double> point(std::size_t label) const { return points_.at(label); }
    std::span<const std::complex<double>> points() const noexcept { return points_; }

    // Bit `b` (0 = first in the group) of `label`.
    unsigned label_bit(std::size_t label, unsigned b) const noexcept
    {
        return static_cast<unsigned>((label >> (bits_ - 1 - b)) & 1u);
    }

    double max_magnitude() const noexcept
    {
        double m = 0.0;
        for (auto p : points_) {
            m = std::max(m, std::abs(p));
        }
        return m;
    }

private:
    Modulation modulation_;
    unsigned bits_ = 2;
    std::vector<std::complex<double>> points_;
};

inline std::vector<std::complex<double>> qam_map(std::span<const Bit> bits, const Constellation& c)
{
    const unsigned m = c.bits_per_symbol();
    if (bits.size() % m != 0) {
        throw FramingError("bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                           std::to_string(m));
    }
    std::vector<std::complex<double>> out;
    out.reserve(bits.size() / m);
    for (std::size_t i = 0; i < bits.size(); i += m) {
        std::size_t label = 0;
        for (unsigned b = 0; b < m; ++b) {
            label = (label << 1) | (bits[i + b] & 1u);
        }
        out.push_back(c.point(label));
    }
    return out;
}

// Max-log LLRs for y = gain * X + n, E|n|^2 = noise_var, appended to `out`.
inline void soft_demap(std::complex<double> y, double gain, double noise_var, const Constellation& c,
                       std::vector<double>& out)
{
    if (!(noise_var > 0.0)) {
        throw DomainError("soft_demap needs a positive noise variance");
    }
    const unsigned m = c.bits_per_symbol();
    constexpr double inf = std::numeric_limits<double>::infinity();
    double best0[6];
    double best1[6];
    std::fill(best0, best0 + m, inf);
    std::fill(best1, best1 + m, inf);
    const auto pts = c.points();
    for (std::size_t label = 0; label < pts.size(); ++label) {
        const double d = std::norm(y - gain * pts[label]);
        for (unsigned b = 0; b < m; ++b) {
            double& slot = c.label_bit(label, b) ? best1[b] : best0[b];
            slot = std::min(slot, d);
        }
    }
    for (unsigned b = 0; b < m; ++b) {
        out.push_back(clamp_llr((best1[b] - best0[b]) / noise_var));
    }
}

inline std::vector<double> soft_demap(std::complex<double> y, double gain, double noise_var, const Constellation& c)
{
    std::vector<double> out;
    out.reserve(c.bits_per_symbol());
    soft_demap(y, gain, noise_var, c, out);
    return out;
}

// Posterior mean sum_s s * P(s), P(s) the product of per-bit probabilities from `llrs`
// (one group of bits_per_symbol LLRs, clamped to +-30).
inline std::complex<double> soft_map(std::span<const double> llrs, const Constellation& c)
{
    const unsigned m = c.bits_per_symbol();
    if (llrs.size() != m) {
        throw FramingError("soft_map expects one LLR per label bit");
    }
    double p0[6];
    double p1[6];
    for (unsigned b = 0; b < m; ++b) {
        const double l = clamp_llr(llrs[b]);
        p0[b] = 1.0 / (1.0 + std::exp(-l));
        p1[b] = 1.0 / (1.0 + std::exp(l));
    }
    std::complex<double> mean{0.0, 0.0};
    const auto pts = c.points();
    for (std::size_t label = 0; label < pts.size(); ++label) {
        double p = 1.0;
        for (unsigned b = 0; b < m; ++b) {
            p *= c.label_bit(label, b) ? p1[b] : p0[b];
        }
        mean += p * pts[label];
    }
    return mean;
}

} // namespace coopmimo

#endif // COOPMIMO_QAM_HPP
