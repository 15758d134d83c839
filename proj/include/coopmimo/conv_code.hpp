#ifndef COOPMIMO_CONV_CODE_HPP
#define COOPMIMO_CONV_CODE_HPP

#include "coopmimo/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coopmimo {

using Bit = std::uint8_t;

enum class CodeRate { half, two_thirds };

inline std::string_view to_string(CodeRate r) noexcept { return r == CodeRate::half ? "1/2" : "2/3"; }

inline CodeRate code_rate_from_string(std::string_view s)
{
    if (s == "1/2" || s == "0.5") {
        return CodeRate::half;
    }
    if (s == "2/3") {
        return CodeRate::two_thirds;
    }
    throw ConfigError("unknown code rate '" + std::string(s) + "'");
}

inline double rate_value(CodeRate r) noexcept { return r == CodeRate::half ? 0.5 : 2.0 / 3.0; }

// Which coded-bit LLRs the decoder hands back to the soft mapper.
enum class FeedbackMode { a_posteriori, extrinsic };

// (133,171)_8 mother code, constraint length 7, terminated with 6 zero tail bits.
// Rate 2/3 keeps [1 1; 1 0] over two trellis steps: A1 B1 A2.
struct CodeConfig {
    CodeRate rate = CodeRate::half;

    static constexpr unsigned constraint_length = 7;
    static constexpr unsigned memory = constraint_length - 1;
    static constexpr unsigned states = 1u << memory;
    static constexpr unsigned tail_bits = memory;
    static constexpr std::array<unsigned, 2> generators{0133, 0171};

    // Coded bits emitted for `info_bits` information bits (tail included).
    std::size_t coded_length(std::size_t info_bits) const
    {
        const std::size_t steps = info_bits + tail_bits;
        if (rate == CodeRate::half) {
            return 2 * steps;
        }
        if (steps % 2 != 0) {
            throw FramingError("rate 2/3 needs an even number of trellis steps");
        }
        return steps / 2 * 3;
    }

    // Inverse of coded_length; throws when no information length fits exactly.
    std::size_t info_length(std::size_t coded_bits) const
    {
        std::size_t steps = 0;
        if (rate == CodeRate::half) {
            if (coded_bits % 2 != 0) {
                throw FramingError("rate 1/2 codeword length must be even");
            }
            steps = coded_bits / 2;
        } else {
            if (coded_bits % 3 != 0) {
                throw FramingError("rate 2/3 codeword length must be a multiple of 3");
            }
            steps = coded_bits / 3 * 2;
        }
        if (steps <= tail_bits) {
            throw FramingError("codeword too short to carry the trellis tail");
        }
        return steps - tail_bits;
    }

    // Whether mother-code output `branch` (0 = G1, 1 = G2) of trellis step `step` is transmitted.
    bool kept(std::size_t step, unsigned branch) const noexcept
    {
        return rate == CodeRate::half || branch == 0 || step % 2 == 0;
    }
};

namespace detail {

struct TrellisOutputs {
    // outputs[state][input] packs (G1 bit) | (G2 bit) << 1
    std::array<std::array<std::uint8_t, 2>, CodeConfig::states> outputs{};

    constexpr TrellisOutputs()
    {
        for (unsigned s = 0; s < CodeConfig::states; ++s) {
            for (unsigned u = 0; u < 2; ++u) {
                const unsigned reg = (u << CodeConfig::memory) | s;
                const auto c1 = static_cast<std::uint8_t>(std::popcount(reg & CodeConfig::generators[0]) & 1);
                const auto c2 = static_cast<std::uint8_t>(std::popcount(reg & CodeConfig::generators[1]) & 1);
                outputs[s][u] = static_cast<std::uint8_t>(c1 | (c2 << 1));
            }
        }
    }
};

inline constexpr TrellisOutputs trellis{};

// Register layout: the newest input sits at bit `memory` of the 7-bit register so the
// MSB of each octal generator taps the current input.
constexpr unsigned next_state(unsigned state, unsigned input) noexcept
{
    return ((input << CodeConfig::memory) | state) >> 1;
}

} // namespace detail

// Rate-1/2 mother encoding of info bits plus zero tail, punctured per `config`.
inline std::vector<Bit> conv_encode(std::span<const Bit> bits, const CodeConfig& config)
{
    std::vector<Bit> out;
    out.reserve(config.coded_length(bits.size()));
    unsigned state = 0;
    const std::size_t steps = bits.size() + CodeConfig::tail_bits;
    for (std::size_t k = 0; k < steps; ++k) {
        const unsigned u = k < bits.size() ? (bits[k] & 1u) : 0u;
        const std::uint8_t c = detail::trellis.outputs[state][u];
        if (config.kept(k, 0)) {
            out.push_back(static_cast<Bit>(c & 1u));
        }
        if (config.kept(k, 1)) {
            out.push_back(static_cast<Bit>((c >> 1) & 1u));
        }
        state = detail::next_state(state, u);
    }
    return out;
}

// Expand transmitted-bit LLRs to the 2-per-step mother layout; punctured slots get 0.
inline std::vector<double> depuncture(std::span<const double> llrs, const CodeConfig& config)
{
    const std::size_t info = config.info_length(llrs.size());
    const std::size_t steps = info + CodeConfig::tail_bits;
    std::vector<double> mother(2 * steps, 0.0);
    std::size_t i = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        for (unsigned b = 0; b < 2; ++b) {
            if (config.kept(k, b)) {
                mother[2 * k + b] = llrs[i++];
            }
        }
    }
    return mother;
}

inline std::vector<double> puncture(std::span<const double> mother, const CodeConfig& config)
{
    const std::size_t steps = mother.size() / 2;
    std::vector<double> out;
    out.reserve(mother.size());
    for (std::size_t k = 0; k < steps; ++k) {
        for (unsigned b = 0; b < 2; ++b) {
            if (config.kept(k, b)) {
                out.push_back(mother[2 * k + b]);
            }
        }
    }
    return out;
}

struct SisoResult {
    std::vector<Bit> info_bits;       // hard decisions, LLR >= 0 decides 0
    std::vector<double> info_llrs;    // a-posteriori, log P(0)/P(1)
    std::vector<double> coded_llrs;   // per transmitted coded bit
};

// Max-log-MAP (BCJR) over the 64-state terminated trellis. Input and output use the
// convention LLR = log P(b=0)/P(b=1).
inline SisoResult siso_decode(std::span<const double> llrs, const CodeConfig& config,
                              FeedbackMode feedback = FeedbackMode::a_posteriori)
{
    constexpr unsigned S = CodeConfig::states;
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();

    const std::vector<double> mother = depuncture(llrs, config);
    const std::size_t steps = mother.size() / 2;
    const std::size_t info = steps - CodeConfig::tail_bits;

    // Branch metric for output pattern c (bit0 = G1, bit1 = G2) at step k.
    auto gamma = [&](std::size_t k, std::uint8_t c) {
        const double l1 = mother[2 * k];
        const double l2 = mother[2 * k + 1];
        return 0.5 * ((c & 1u) ? -l1 : l1) + 0.5 * ((c & 2u) ? -l2 : l2);
    };

    std::vector<std::array<double, S>> alpha(steps + 1);
    std::vector<std::array<double, S>> beta(steps + 1);
    alpha[0].fill(neg_inf);
    alpha[0][0] = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        auto& next = alpha[k + 1];
        next.fill(neg_inf);
        const unsigned max_input = k < info ? 2u : 1u;
        for (unsigned s = 0; s < S; ++s) {
            const double a = alpha[k][s];
            if (a == neg_inf) {
                continue;
            }
            for (unsigned u = 0; u < max_input; ++u) {
                const unsigned ns = detail::next_state(s, u);
                next[ns] = std::max(next[ns], a + gamma(k, detail::trellis.outputs[s][u]));
            }
        }
    }
    beta[steps].fill(neg_inf);
    beta[steps][0] = 0.0;
    for (std::size_t k = steps; k-- > 0;) {
        auto& cur = beta[k];
        cur.fill(neg_inf);
        const unsigned max_input = k < info ? 2u : 1u;
        for (unsigned s = 0; s < S; ++s) {
            for (unsigned u = 0; u < max_input; ++u) {
                const double b = beta[k + 1][detail::next_state(s, u)];
                if (b == neg_inf) {
                    continue;
                }
                cur[s] = std::max(cur[s], b + gamma(k, detail::trellis.outputs[s][u]));
            }
        }
    }

    SisoResult out;
    out.info_bits.resize(info);
    out.info_llrs.resize(info);
    std::vector<double> coded_mother(2 * steps);
    for (std::size_t k = 0; k < steps; ++k) {
        std::array<double, 2> best_u{neg_inf, neg_inf};
        std::array<double, 2> best_c1{neg_inf, neg_inf};
        std::array<double, 2> best_c2{neg_inf, neg_inf};
        const unsigned max_input = k < info ? 2u : 1u;
        for (unsigned s = 0; s < S; ++s) {
            const double a = alpha[k][s];
            if (a == neg_inf) {
                continue;
            }
            for (unsigned u = 0; u < max_input; ++u) {
                const std::uint8_t c = detail::trellis.outputs[s][u];
                const double m = a + gamma(k, c) + beta[k + 1][detail::next_state(s, u)];
                best_u[u] = std::max(best_u[u], m);
                best_c1[c & 1u] = std::max(best_c1[c & 1u], m);
                best_c2[(c >> 1) & 1u] = std::max(best_c2[(c >> 1) & 1u], m);
            }
        }
        auto diff = [](const std::array<double, 2>& m) {
            if (m[0] == neg_inf && m[1] == neg_inf) {
                return 0.0;
            }
            if (m[1] == neg_inf) {
                return std::numeric_limits<double>::max();
            }
            if (m[0] == neg_inf) {
                return std::numeric_limits<double>::lowest();
            }
            return m[0] - m[1];
        };
        if (k < info) {
            out.info_llrs[k] = diff(best_u);
            out.info_bits[k] = out.info_llrs[k] >= 0.0 ? Bit{0} : Bit{1};
        }
        coded_mother[2 * k] = diff(best_c1);
        coded_mother[2 * k + 1] = diff(best_c2);
        if (feedback == FeedbackMode::extrinsic) {
            coded_mother[2 * k] -= mother[2 * k];
            coded_mother[2 * k + 1] -= mother[2 * k + 1];
        }
    }
    out.coded_llrs = puncture(coded_mother, config);
    return out;
}

} // namespace coopmimo

#endif // COOPMIMO_CONV_CODE_HPP
