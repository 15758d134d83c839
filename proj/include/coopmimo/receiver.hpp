#ifndef COOPMIMO_RECEIVER_HPP
#define COOPMIMO_RECEIVER_HPP

#include "coopmimo/conv_code.hpp"
#include "coopmimo/errors.hpp"
#include "coopmimo/interleaver.hpp"
#include "coopmimo/qam.hpp"
#include "coopmimo/stbc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coopmimo {

// Noise floor used wherever an SNR or a demapper variance would otherwise divide by zero.
inline constexpr double min_noise_var = 1e-30;
inline constexpr double min_demap_var = 1e-12;
inline constexpr double mmse_regularization = 1e-12;

struct PhaseSnr {
    double rho1 = 0.0;
    double rho2 = 0.0;
};

struct Phase1Estimate {
    std::complex<double> estimate{0.0, 0.0};
    double rho1 = 0.0;
    bool usable = false; // false when every direct-link coefficient is zero
};

// Maximum-ratio combining of the M direct-link observations of one symbol.
inline Phase1Estimate phase1_detect(std::span<const std::complex<double>> u, std::span<const std::complex<double>> h_sd,
                                    double p_d, double sigma2)
{
    if (u.size() != h_sd.size()) {
        throw FramingError("phase-1 observations and channel differ in antenna count");
    }
    double energy = 0.0;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < u.size(); ++j) {
        energy += std::norm(h_sd[j]);
        acc += std::conj(h_sd[j]) * u[j];
    }
    if (!(energy > 0.0) || !(p_d > 0.0)) {
        return {};
    }
    return {acc / (std::sqrt(p_d) * energy), p_d * energy / std::max(sigma2, min_noise_var), true};
}

// SNR-weighted combination of the two phase estimates.
inline std::complex<double> combine_phases(std::complex<double> x1, std::complex<double> x2, PhaseSnr snr)
{
    const double total = snr.rho1 + snr.rho2;
    if (!(total > 0.0)) {
        throw NoSignalError("both detection phases have zero SNR");
    }
    return (snr.rho1 * x1 + snr.rho2 * x2) / total;
}

struct MmseEstimate {
    Eigen::VectorXd estimates; // (2Q) g_p^T A^{-1} y
    Eigen::VectorXd bias;      // (2Q) g_p^T A^{-1} g_p, the gain of component p in its own estimate
};

namespace detail {

inline MmseEstimate mmse_solve(const Eigen::VectorXd& y, const Eigen::MatrixXd& geq, Eigen::MatrixXd a)
{
    a.diagonal().array() += mmse_regularization;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    const Eigen::MatrixXd k = ldlt.solve(geq); // A^{-1} G
    return {k.transpose() * y, geq.cwiseProduct(k).colwise().sum().transpose()};
}

} // namespace detail

// Linear MMSE estimate of every real component: g_p^T (Geq Geq^T + nu I)^{-1} y.
inline MmseEstimate mmse_detect(const Eigen::VectorXd& y, const Eigen::MatrixXd& geq, double noise_var)
{
    if (noise_var < 0.0) {
        throw DomainError("MMSE noise variance must be non-negative");
    }
    if (y.size() != geq.rows()) {
        throw FramingError("received vector does not match Geq rows");
    }
    Eigen::MatrixXd a = geq * geq.transpose();
    a.diagonal().array() += noise_var;
    return detail::mmse_solve(y, geq, std::move(a));
}

// Variant with an explicit noise covariance, in the same per-complex-dimension units as noise_var.
inline MmseEstimate mmse_detect(const Eigen::VectorXd& y, const Eigen::MatrixXd& geq, const Eigen::MatrixXd& noise_cov)
{
    if (y.size() != geq.rows() || noise_cov.rows() != geq.rows() || noise_cov.cols() != geq.rows()) {
        throw FramingError("MMSE operand dimensions do not conform");
    }
    return detail::mmse_solve(y, geq, geq * geq.transpose() + noise_cov);
}

// Interference-cancelled projection of component p: subtract every other component's
// soft estimate, then g_p^T y_p / g_p^T g_p. `feedback` holds all 2Q soft estimates; its
// p-th entry is ignored. Empty when column p of Geq is zero.
inline std::optional<double> pic_iterate(const Eigen::VectorXd& y, const Eigen::MatrixXd& geq,
                                         const Eigen::VectorXd& feedback, Eigen::Index p)
{
    if (feedback.size() != geq.cols() || y.size() != geq.rows() || p < 0 || p >= geq.cols()) {
        throw FramingError("PIC operand dimensions do not conform");
    }
    const auto g = geq.col(p);
    const double gg = g.squaredNorm();
    if (!(gg > 0.0)) {
        return std::nullopt;
    }
    const Eigen::VectorXd residual = y - geq * feedback + g * feedback(p);
    return g.dot(residual) / gg;
}

// All components at once; entries whose column is zero keep `feedback`.
inline Eigen::VectorXd pic_detect(const Eigen::VectorXd& y, const Eigen::MatrixXd& geq, const Eigen::VectorXd& feedback)
{
    const Eigen::VectorXd residual = y - geq * feedback;
    Eigen::VectorXd out = feedback;
    for (Eigen::Index p = 0; p < geq.cols(); ++p) {
        const double gg = geq.col(p).squaredNorm();
        if (gg > 0.0) {
            out(p) += geq.col(p).dot(residual) / gg;
        }
    }
    return out;
}

enum class NoiseMode { paper_literal, full_covariance };

struct ReceiverConfig {
    unsigned iterations = 3;
    NoiseMode noise_mode = NoiseMode::paper_literal;
    FeedbackMode feedback = FeedbackMode::a_posteriori;
};

// Everything the destination knows about one space-time block.
struct BlockObservation {
    Eigen::VectorXd yd;        // stacked phase-2 signal (2MT)
    EquivalentChannel channel; // Geq and relay-noise shaping
    Eigen::MatrixXcd u;        // phase-1 observations (M, Q)
    Eigen::VectorXcd h_sd;     // direct-link channel (M)
    double p_d = 0.0;          // direct-link receive power, linear
};

// Bit/symbol layout of one coded frame spanning `blocks` space-time blocks.
struct FrameLayout {
    StbcScheme scheme;
    Constellation constellation;
    CodeConfig code;
    Interleaver interleaver;
    std::size_t blocks = 0;
    std::size_t coded_bits = 0;
    std::size_t info_bits = 0;

    static FrameLayout make(const StbcScheme& scheme, Modulation modulation, CodeRate rate, std::size_t blocks,
                            std::uint64_t interleaver_seed)
    {
        if (blocks == 0) {
            throw ConfigError("a frame needs at least one space-time block");
        }
        Constellation c(modulation);
        CodeConfig code{rate};
        const std::size_t coded = blocks * scheme.symbols() * c.bits_per_symbol();
        const std::size_t info = code.info_length(coded);
        if (code.coded_length(info) != coded) {
            throw ConfigError("frame of " + std::to_string(coded) + " coded bits does not fit rate " +
                              std::string(to_string(rate)));
        }
        return {scheme, c, code, Interleaver(coded, interleaver_seed), blocks, coded, info};
    }

    std::size_t symbols() const noexcept { return blocks * scheme.symbols(); }
};

struct ReceiveResult {
    std::vector<std::vector<Bit>> decisions; // info-bit decisions after each iteration

    const std::vector<Bit>& final_bits() const { return decisions.back(); }
};

namespace detail {

// Unbiased phase-2 estimate of one complex symbol and its SNR, from the real components
// (re, im) with gains b and noise variances v per real dimension.
struct Phase2Symbol {
    std::complex<double> estimate;
    double rho2 = 0.0;
};

inline Phase2Symbol phase2_symbol(double est_re, double est_im, double gain_re, double gain_im, double var_re,
                                  double var_im)
{
    if (!(gain_re > 0.0) || !(gain_im > 0.0)) {
        return {{0.0, 0.0}, 0.0};
    }
    const double var = std::max(var_re + var_im, min_noise_var);
    return {{est_re / gain_re, est_im / gain_im}, 1.0 / var};
}

} // namespace detail

// Iterative destination receiver. Iteration 1: MMSE on the phase-2 system, SNR-weighted
// combination with the phase-1 MRC estimate, max-log demapping, deinterleaving and SISO
// decoding. Later iterations replace MMSE by parallel interference cancellation fed with
// soft symbols rebuilt from the decoder's coded-bit LLRs.
inline ReceiveResult iterative_receive(std::span<const BlockObservation> blocks, double sigma2,
                                       const FrameLayout& layout, const ReceiverConfig& config)
{
    if (config.iterations < 1) {
        throw ConfigError("receiver needs at least one iteration");
    }
    if (blocks.size() != layout.blocks) {
        throw FramingError("frame holds " + std::to_string(blocks.size()) + " blocks, layout expects " +
                           std::to_string(layout.blocks));
    }
    const auto Q = static_cast<Eigen::Index>(layout.scheme.symbols());
    const unsigned m = layout.constellation.bits_per_symbol();

    struct BlockState {
        std::vector<Phase1Estimate> phase1;
        MmseEstimate mmse;
        Eigen::VectorXd col_energy;
        double nu = 0.0;
        Eigen::VectorXd soft; // 2Q soft symbols from the previous decoding pass
    };
    std::vector<BlockState> state(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& obs = blocks[b];
        auto& st = state[b];
        const auto& geq = obs.channel.geq;
        const auto& shaping = obs.channel.noise_shaping;
        if (geq.cols() != 2 * Q || obs.u.cols() != Q) {
            throw FramingError("block observation does not match the scheme");
        }
        st.phase1.reserve(static_cast<std::size_t>(Q));
        for (Eigen::Index q = 0; q < Q; ++q) {
            const Eigen::VectorXcd uq = obs.u.col(q);
            st.phase1.push_back(phase1_detect({uq.data(), static_cast<std::size_t>(uq.size())},
                                              {obs.h_sd.data(), static_cast<std::size_t>(obs.h_sd.size())}, obs.p_d,
                                              sigma2));
        }
        const double shaping_energy = shaping.size() > 0 ? shaping.squaredNorm() / static_cast<double>(shaping.rows()) : 0.0;
        st.nu = sigma2 * (1.0 + shaping_energy);
        if (config.noise_mode == NoiseMode::paper_literal) {
            st.mmse = mmse_detect(obs.yd, geq, st.nu);
        } else {
            Eigen::MatrixXd cov = shaping * shaping.transpose();
            cov.diagonal().array() += 1.0;
            st.mmse = mmse_detect(obs.yd, geq, Eigen::MatrixXd(sigma2 * cov));
        }
        st.col_energy = geq.colwise().squaredNorm().transpose();
    }

    ReceiveResult result;
    std::vector<double> llrs;
    llrs.reserve(layout.coded_bits);
    for (unsigned it = 1; it <= config.iterations; ++it) {
        llrs.clear();
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            auto& st = state[b];
            Eigen::VectorXd pic;
            if (it > 1) {
                pic = pic_detect(blocks[b].yd, blocks[b].channel.geq, st.soft);
            }
            for (Eigen::Index q = 0; q < Q; ++q) {
                const Eigen::Index re = 2 * q;
                const Eigen::Index im = re + 1;
                detail::Phase2Symbol p2;
                if (it == 1) {
                    const double b_re = st.mmse.bias(re);
                    const double b_im = st.mmse.bias(im);
                    // unbiased MMSE: residual variance (1 - b) / (2 b) per real dimension
                    p2 = detail::phase2_symbol(st.mmse.estimates(re), st.mmse.estimates(im), b_re, b_im,
                                               std::max(1.0 - b_re, 0.0) / (2.0 * b_re),
                                               std::max(1.0 - b_im, 0.0) / (2.0 * b_im));
                } else {
                    const double e_re = st.col_energy(re);
                    const double e_im = st.col_energy(im);
                    p2 = detail::phase2_symbol(pic(re), pic(im), e_re > 0.0 ? 1.0 : 0.0, e_im > 0.0 ? 1.0 : 0.0,
                                               st.nu / (2.0 * e_re), st.nu / (2.0 * e_im));
                }
                const auto& p1 = st.phase1[static_cast<std::size_t>(q)];
                const PhaseSnr snr{p1.usable ? p1.rho1 : 0.0, p2.rho2};
                std::complex<double> combined{0.0, 0.0};
                double var = 1.0;
                if (snr.rho1 + snr.rho2 > 0.0) {
                    combined = combine_phases(p1.estimate, p2.estimate, snr);
                    var = 1.0 / (snr.rho1 + snr.rho2);
                } else {
                    // nothing received for this symbol: erase its bits
                    llrs.insert(llrs.end(), m, 0.0);
                    continue;
                }
                soft_demap(combined, 1.0, std::max(var, min_demap_var), layout.constellation, llrs);
            }
        }

        const std::vector<double> coded = layout.interleaver.deinterleave<double>(llrs);
        SisoResult dec = siso_decode(coded, layout.code, config.feedback);
        result.decisions.push_back(std::move(dec.info_bits));
        if (it == config.iterations) {
            break;
        }

        const std::vector<double> app = layout.interleaver.interleave<double>(dec.coded_llrs);
        std::size_t k = 0;
        for (auto& st : state) {
            st.soft.resize(2 * Q);
            for (Eigen::Index q = 0; q < Q; ++q) {
                const std::complex<double> s = soft_map(std::span<const double>(app).subspan(k, m), layout.constellation);
                k += m;
                st.soft(2 * q) = s.real();
                st.soft(2 * q + 1) = s.imag();
            }
        }
    }
    return result;
}

} // namespace coopmimo

#endif // COOPMIMO_RECEIVER_HPP
