#ifndef COOPMIMO_VALIDATION_HPP
#define COOPMIMO_VALIDATION_HPP

#include "coopmimo/config.hpp"
#include "coopmimo/conv_code.hpp"
#include "coopmimo/receiver.hpp"
#include "coopmimo/rng.hpp"
#include "coopmimo/simulation.hpp"
#include "coopmimo/stbc.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

// Quick self-checks behind `coopmimo validate`: structural identities of the simulator that
// must hold for any seed. The full-size versions live in the acceptance suite.
namespace coopmimo::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::vector<StbcScheme> all_schemes()
{
    return {StbcScheme::alamouti(), StbcScheme::golden_code(), StbcScheme::dlst()};
}

template <class Engine>
Eigen::VectorXcd random_symbols(Engine& rng, std::size_t n)
{
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (auto& s : v) {
        s = complex_gaussian(rng);
    }
    return v;
}

template <class Engine>
std::vector<AfGain> random_gains(Engine& rng, std::size_t relays)
{
    std::vector<AfGain> g;
    std::uniform_real_distribution<double> pw(0.1, 4.0);
    for (std::size_t r = 0; r < relays; ++r) {
        g.push_back(af_gain(pw(rng), complex_gaussian(rng), pw(rng) * 0.1));
    }
    return g;
}

} // namespace detail

// Geq x equals the noiseless chain relay gains -> per-relay encoding -> row selection -> channel.
inline CheckResult check_geq_equivalence(std::size_t draws, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::uniform_real_distribution<double> pw(0.1, 4.0);
    double worst = 0.0;
    for (const auto& scheme : detail::all_schemes()) {
        const auto R = static_cast<Eigen::Index>(scheme.relays());
        const auto Q = scheme.symbols();
        for (std::size_t d = 0; d < draws; ++d) {
            const Eigen::VectorXcd x = detail::random_symbols(rng, Q);
            const auto gains = detail::random_gains(rng, scheme.relays());
            Eigen::MatrixXcd h(2, R);
            for (auto& c : h.reshaped()) {
                c = complex_gaussian(rng);
            }
            std::vector<double> p(static_cast<std::size_t>(R));
            for (auto& v : p) {
                v = pw(rng);
            }
            Eigen::MatrixXcd w(R, static_cast<Eigen::Index>(scheme.periods()));
            for (Eigen::Index r = 0; r < R; ++r) {
                const Eigen::VectorXcd y = gains[static_cast<std::size_t>(r)].h_eq * x;
                w.row(r) = encode_block({y.data(), Q}, scheme).row(r);
            }
            Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(R, R);
            for (Eigen::Index r = 0; r < R; ++r) {
                amp(r, r) = std::sqrt(p[static_cast<std::size_t>(r)]);
            }
            const Eigen::VectorXd direct = stack_matrix(h * amp * w);
            const EquivalentChannel eq = equivalent_channel(scheme, h, p, gains);
            worst = std::max(worst, (eq.geq * stack_vector(x) - direct).cwiseAbs().maxCoeff());
        }
    }
    std::ostringstream os;
    os << "max abs error " << worst;
    return {"geq-equivalence", worst < 1e-10, os.str()};
}

inline CheckResult check_alamouti_orthogonality(std::size_t draws, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    const StbcScheme scheme = StbcScheme::alamouti();
    double worst = 0.0;
    for (std::size_t d = 0; d < draws; ++d) {
        // Orthogonality needs conj(a1) a2 real for the relay gains a_r; a first hop with
        // independent phases breaks it, so the check uses phase-aligned gains.
        auto gains = detail::random_gains(rng, 2);
        for (auto& g : gains) {
            g.h_eq = std::abs(g.h_eq);
        }
        Eigen::MatrixXcd h(2, 2);
        for (auto& c : h.reshaped()) {
            c = complex_gaussian(rng);
        }
        const std::vector<double> p{1.3, 0.4};
        const Eigen::MatrixXd geq = equivalent_channel(scheme, h, p, gains).geq;
        const Eigen::MatrixXd gram = geq.transpose() * geq;
        const double diag = gram.diagonal().norm();
        Eigen::MatrixXd off = gram;
        off.diagonal().setZero();
        const Eigen::VectorXd d_entries = gram.diagonal();
        const double spread = d_entries.maxCoeff() - d_entries.minCoeff();
        worst = std::max(worst, (off.cwiseAbs().maxCoeff() + spread) / diag);
    }
    std::ostringstream os;
    os << "max relative deviation from c*I " << worst;
    return {"alamouti-orthogonality", worst < 1e-10, os.str()};
}

inline CheckResult check_exact_pic(std::size_t draws, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    double worst = 0.0;
    for (const auto& scheme : detail::all_schemes()) {
        const auto R = static_cast<Eigen::Index>(scheme.relays());
        for (std::size_t d = 0; d < draws; ++d) {
            const Eigen::VectorXd x = stack_vector(detail::random_symbols(rng, scheme.symbols()));
            const auto gains = detail::random_gains(rng, scheme.relays());
            Eigen::MatrixXcd h(2, R);
            for (auto& c : h.reshaped()) {
                c = complex_gaussian(rng);
            }
            const std::vector<double> p(static_cast<std::size_t>(R), 1.0);
            const Eigen::MatrixXd geq = equivalent_channel(scheme, h, p, gains).geq;
            worst = std::max(worst, (pic_detect(geq * x, geq, x) - x).cwiseAbs().maxCoeff());
        }
    }
    std::ostringstream os;
    os << "max abs error " << worst;
    return {"exact-pic", worst < 1e-10, os.str()};
}

// Max-log-MAP decisions against exhaustive ML over all 2^k messages.
inline CheckResult check_decoder_ml(std::size_t k, std::size_t realizations, std::uint64_t seed)
{
    const CodeConfig code{CodeRate::half};
    std::vector<std::vector<Bit>> codebook;
    std::vector<std::vector<Bit>> messages;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
        std::vector<Bit> msg(k);
        for (std::size_t i = 0; i < k; ++i) {
            msg[i] = static_cast<Bit>((m >> i) & 1u);
        }
        codebook.push_back(conv_encode(msg, code));
        messages.push_back(std::move(msg));
    }
    SplitMix64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::size_t mismatches = 0;
    for (std::size_t t = 0; t < realizations; ++t) {
        const auto& sent = codebook[rng() % codebook.size()];
        std::vector<double> llr(sent.size());
        for (std::size_t i = 0; i < sent.size(); ++i) {
            llr[i] = 2.0 * ((sent[i] ? -1.0 : 1.0) + noise(rng));
        }
        std::size_t best = 0;
        double best_metric = -1e300;
        for (std::size_t c = 0; c < codebook.size(); ++c) {
            double metric = 0.0;
            for (std::size_t i = 0; i < llr.size(); ++i) {
                metric += codebook[c][i] ? -llr[i] : llr[i];
            }
            if (metric > best_metric) {
                best_metric = metric;
                best = c;
            }
        }
        if (siso_decode(llr, code).info_bits != messages[best]) {
            ++mismatches;
        }
    }
    return {"decoder-vs-ml", mismatches == 0, std::to_string(mismatches) + " mismatches"};
}

inline CheckResult check_noiseless_loopback(std::size_t frames)
{
    std::uint64_t errors = 0;
    for (const char* name : {"alamouti", "golden", "dlst"}) {
        for (Strategy s : {Strategy::pi, Strategy::random}) {
            ScenarioConfig cfg;
            cfg.scheme = name;
            cfg.strategy = s;
            cfg.sigma2 = 0.0;
            cfg.frames = frames;
            errors += run_point(cfg).bit_errors;
        }
    }
    return {"noiseless-loopback", errors == 0, std::to_string(errors) + " bit errors"};
}

inline CheckResult check_determinism(std::size_t frames)
{
    ScenarioConfig cfg;
    cfg.frames = frames;
    cfg.sigma2 = 1e-12;
    const BerRecord a = run_point(cfg);
    cfg.workers = 3;
    const BerRecord b = run_point(cfg);
    return {"determinism", a == b, std::to_string(a.bit_errors) + " vs " + std::to_string(b.bit_errors) + " errors"};
}

inline std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 1)
{
    return {
        check_geq_equivalence(200, seed),
        check_alamouti_orthogonality(200, seed),
        check_exact_pic(200, seed),
        check_decoder_ml(8, 20, seed),
        check_noiseless_loopback(50),
        check_determinism(60),
    };
}

} // namespace coopmimo::validation

#endif // COOPMIMO_VALIDATION_HPP
