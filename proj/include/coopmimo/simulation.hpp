#ifndef COOPMIMO_SIMULATION_HPP
#define COOPMIMO_SIMULATION_HPP

#include "coopmimo/channel.hpp"
#include "coopmimo/config.hpp"
#include "coopmimo/conv_code.hpp"
#include "coopmimo/geometry.hpp"
#include "coopmimo/qam.hpp"
#include "coopmimo/receiver.hpp"
#include "coopmimo/relay.hpp"
#include "coopmimo/rng.hpp"
#include "coopmimo/stbc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace coopmimo {

struct BerRecord {
    std::string scheme;
    std::string strategy;
    std::size_t n_relays = 0;
    double ps_db = 0.0;
    std::size_t frames = 0;
    std::uint64_t info_bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const BerRecord&, const BerRecord&) = default;
};

// Selected relays and linear receive powers at one trajectory sample.
struct PositionPlan {
    Position mt;
    double tunnel_depth = 0.0;
    std::vector<int> relay_ids;
    double p_source_dest = 0.0;
    std::vector<double> p_source_relay;
    std::vector<double> p_relay_dest;
};

struct PointResult {
    BerRecord record;
    std::vector<std::uint64_t> errors_per_iteration;
    std::vector<std::uint64_t> position_errors; // final-iteration errors per trajectory sample
    std::vector<std::uint64_t> position_bits;
};

// Distances below the 1 m path-loss reference are clamped to it.
inline double link_power(double ps_db, double distance, double alpha, double excess_db)
{
    const double d = std::max(distance, path_loss_reference_m);
    return LinkPower{path_loss_received_power(ps_db, d, alpha).value_db - excess_db}.linear();
}

// Relay selection and link budget for every trajectory sample. Tunnel loss applies to the
// links ending at the MT; BS-relay links are never inside the tunnel.
inline std::vector<PositionPlan> plan_trajectory(const ScenarioConfig& cfg, const RelaySet& relays,
                                                 const Trajectory& traj)
{
    const std::size_t R = cfg.stbc().relays();
    const Position bs = cfg.geometry.base_station;
    std::vector<PositionPlan> plans;
    plans.reserve(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        PositionPlan plan;
        plan.mt = traj.samples[i];
        plan.tunnel_depth = traj.tunnel_depth(i);
        const double excess = tunnel_excess_loss(plan.tunnel_depth, cfg.tunnel_model);
        plan.relay_ids = cfg.strategy == Strategy::pi
                             ? select_relays_pi(relays, bs, plan.mt, R).relay_ids
                             : select_relays_random(relays, R, derive_seed(cfg.seed, Stream::random_selection, {i})).relay_ids;
        plan.p_source_dest = link_power(cfg.ps_db, euclidean(bs, plan.mt), cfg.alpha, excess);
        for (int id : plan.relay_ids) {
            const Position rp = relays.relays[static_cast<std::size_t>(id)].position;
            plan.p_source_relay.push_back(link_power(cfg.ps_db, euclidean(bs, rp), cfg.alpha, 0.0));
            plan.p_relay_dest.push_back(link_power(cfg.ps_db, distance_relay_to_mt(bs, rp, plan.mt), cfg.alpha, excess));
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

namespace detail {

template <class Engine>
Eigen::VectorXcd gaussian_vector(Engine& rng, Eigen::Index n, double variance)
{
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = variance > 0.0 ? complex_gaussian(rng, variance) : std::complex<double>{0.0, 0.0};
    }
    return v;
}

} // namespace detail

// Transmits one frame at trajectory sample `plan` and returns the destination's view of
// every space-time block. Random streams are keyed by (seed, frame, block, relay id), so
// a given relay sees the same channel and noise whichever strategy or scheme picked it.
inline std::vector<BlockObservation> transmit_frame(const ScenarioConfig& cfg, const FrameLayout& layout,
                                                    const PositionPlan& plan, std::uint64_t frame,
                                                    std::span<const std::complex<double>> symbols)
{
    const StbcScheme& scheme = layout.scheme;
    const auto R = static_cast<Eigen::Index>(scheme.relays());
    const auto T = static_cast<Eigen::Index>(scheme.periods());
    const auto Q = static_cast<Eigen::Index>(scheme.symbols());
    const auto M = static_cast<Eigen::Index>(cfg.rx_antennas);
    const double sigma2 = cfg.sigma2;

    std::vector<BlockObservation> blocks(layout.blocks);
    std::vector<AfGain> gains(static_cast<std::size_t>(R));
    for (std::size_t b = 0; b < layout.blocks; ++b) {
        const auto x = symbols.subspan(b * scheme.symbols(), scheme.symbols());
        BlockObservation& obs = blocks[b];

        SplitMix64 sd_rng(derive_seed(cfg.seed, Stream::source_dest_channel, {frame, b}));
        obs.h_sd = detail::gaussian_vector(sd_rng, M, 1.0);
        obs.p_d = plan.p_source_dest;

        // phase 1: direct broadcast to the MT
        SplitMix64 n1_rng(derive_seed(cfg.seed, Stream::dest_noise_phase1, {frame, b}));
        obs.u.resize(M, Q);
        for (Eigen::Index q = 0; q < Q; ++q) {
            const Eigen::VectorXcd v = detail::gaussian_vector(n1_rng, M, sigma2);
            obs.u.col(q) = std::sqrt(obs.p_d) * obs.h_sd * x[static_cast<std::size_t>(q)] + v;
        }

        // phase 1 at the relays, AF normalization, per-relay encoding, row selection
        Eigen::MatrixXcd h_rd(M, R);
        Eigen::MatrixXcd w(R, T);
        std::vector<std::complex<double>> relay_in(static_cast<std::size_t>(Q));
        for (Eigen::Index r = 0; r < R; ++r) {
            const auto id = static_cast<std::uint64_t>(plan.relay_ids[static_cast<std::size_t>(r)]);
            const double p_sr = plan.p_source_relay[static_cast<std::size_t>(r)];
            SplitMix64 ch_rng(derive_seed(cfg.seed, Stream::relay_channel, {frame, b, id}));
            const std::complex<double> h_sr = complex_gaussian(ch_rng);
            h_rd.col(r) = detail::gaussian_vector(ch_rng, M, 1.0);

            SplitMix64 nr_rng(derive_seed(cfg.seed, Stream::relay_noise, {frame, b, id}));
            for (Eigen::Index q = 0; q < Q; ++q) {
                const std::complex<double> v = sigma2 > 0.0 ? complex_gaussian(nr_rng, sigma2) : std::complex<double>{};
                const auto [y, g] = af_normalize(std::sqrt(p_sr) * h_sr * x[static_cast<std::size_t>(q)] + v, p_sr,
                                                 h_sr, sigma2);
                relay_in[static_cast<std::size_t>(q)] = y;
                gains[static_cast<std::size_t>(r)] = g;
            }
            w.row(r) = relay_transmit_row(encode_block(relay_in, scheme), static_cast<std::size_t>(r)).transpose();
        }

        // phase 2: relays to the MT
        SplitMix64 n2_rng(derive_seed(cfg.seed, Stream::dest_noise_phase2, {frame, b}));
        Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(R, R);
        for (Eigen::Index r = 0; r < R; ++r) {
            amp(r, r) = std::sqrt(plan.p_relay_dest[static_cast<std::size_t>(r)]);
        }
        Eigen::MatrixXcd yd = h_rd * amp * w;
        for (Eigen::Index j = 0; j < M; ++j) {
            yd.row(j) += detail::gaussian_vector(n2_rng, T, sigma2).transpose();
        }
        obs.yd = stack_matrix(yd);
        obs.channel = equivalent_channel(scheme, h_rd, plan.p_relay_dest, gains);
    }
    return blocks;
}

// Info bits for frame `frame` and the interleaved, mapped symbol stream carrying them.
struct FramePayload {
    std::vector<Bit> info;
    std::vector<std::complex<double>> symbols;
};

inline FramePayload make_payload(const ScenarioConfig& cfg, const FrameLayout& layout, std::uint64_t frame)
{
    FramePayload p;
    p.info.resize(layout.info_bits);
    SplitMix64 rng(derive_seed(cfg.seed, Stream::info_bits, {frame}));
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < p.info.size(); ++i) {
        if (i % 64 == 0) {
            word = rng();
        }
        p.info[i] = static_cast<Bit>((word >> (i % 64)) & 1u);
    }
    const std::vector<Bit> coded = conv_encode(p.info, layout.code);
    const std::vector<Bit> interleaved = layout.interleaver.interleave<Bit>(coded);
    p.symbols = qam_map(interleaved, layout.constellation);
    return p;
}

// Monte-Carlo BER of one scenario: frame f is sent from trajectory sample f mod K+1 so the
// frames cover the whole path evenly. Counts are summed per frame, so the worker count
// only changes wall time.
inline PointResult simulate_point(const ScenarioConfig& cfg)
{
    cfg.validate();
    const StbcScheme scheme = cfg.stbc();
    const FrameLayout layout = FrameLayout::make(scheme, cfg.resolved_modulation(), cfg.resolved_rate(),
                                                 cfg.blocks_per_frame, derive_seed(cfg.seed, Stream::interleaver));
    const auto [relays, traj] = sample_trajectory(cfg.geometry, derive_seed(cfg.seed, Stream::relay_placement));
    const std::vector<PositionPlan> plans = plan_trajectory(cfg, relays, traj);
    const ReceiverConfig rx{cfg.iterations, cfg.noise_mode, cfg.feedback};

    struct Tally {
        std::vector<std::uint64_t> per_iteration;
        std::vector<std::uint64_t> per_position;
    };
    auto run_range = [&](std::size_t begin, std::size_t end, Tally& tally) {
        tally.per_iteration.assign(cfg.iterations, 0);
        tally.per_position.assign(plans.size(), 0);
        for (std::size_t f = begin; f < end; ++f) {
            const std::size_t pos = f % plans.size();
            const FramePayload payload = make_payload(cfg, layout, f);
            const auto blocks = transmit_frame(cfg, layout, plans[pos], f, payload.symbols);
            const ReceiveResult rr = iterative_receive(blocks, cfg.sigma2, layout, rx);
            for (std::size_t it = 0; it < rr.decisions.size(); ++it) {
                std::uint64_t errors = 0;
                for (std::size_t i = 0; i < payload.info.size(); ++i) {
                    errors += rr.decisions[it][i] != payload.info[i];
                }
                tally.per_iteration[it] += errors;
                if (it + 1 == rr.decisions.size()) {
                    tally.per_position[pos] += errors;
                }
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(cfg.workers, cfg.frames);
    std::vector<Tally> tallies(workers);
    if (workers == 1) {
        run_range(0, cfg.frames, tallies[0]);
    } else {
        std::vector<std::exception_ptr> failures(workers);
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.frames + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    run_range(std::min(cfg.frames, w * chunk), std::min(cfg.frames, (w + 1) * chunk), tallies[w]);
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (auto& e : failures) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    PointResult out;
    out.errors_per_iteration.assign(cfg.iterations, 0);
    out.position_errors.assign(plans.size(), 0);
    out.position_bits.assign(plans.size(), 0);
    for (const auto& t : tallies) {
        for (std::size_t i = 0; i < t.per_iteration.size(); ++i) {
            out.errors_per_iteration[i] += t.per_iteration[i];
        }
        for (std::size_t i = 0; i < t.per_position.size(); ++i) {
            out.position_errors[i] += t.per_position[i];
        }
    }
    for (std::size_t f = 0; f < cfg.frames; ++f) {
        out.position_bits[f % plans.size()] += layout.info_bits;
    }

    BerRecord& rec = out.record;
    rec.scheme = scheme.name();
    rec.strategy = std::string(to_string(cfg.strategy));
    rec.n_relays = cfg.geometry.n_relays;
    rec.ps_db = cfg.ps_db;
    rec.frames = cfg.frames;
    rec.info_bits = static_cast<std::uint64_t>(cfg.frames) * layout.info_bits;
    rec.bit_errors = out.errors_per_iteration.back();
    rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.info_bits);
    rec.seed = cfg.seed;
    return out;
}

inline BerRecord run_point(const ScenarioConfig& cfg) { return simulate_point(cfg).record; }

enum class SweepVariable { n_relays, ps_db };

struct SweepSpec {
    SweepVariable variable = SweepVariable::n_relays;
    std::vector<double> values;
    ScenarioConfig base;
    std::vector<std::string> schemes;   // empty: base.scheme only
    std::vector<Strategy> strategies;   // empty: base.strategy only
};

// One record per scheme x strategy x value, in that nesting order. Switching scheme resets
// modulation and code rate to that scheme's 4 b/s/Hz row.
inline std::vector<BerRecord> run_sweep(const SweepSpec& spec)
{
    if (spec.values.empty()) {
        throw ConfigError("sweep needs at least one value");
    }
    const std::vector<std::string> schemes = spec.schemes.empty() ? std::vector<std::string>{spec.base.scheme} : spec.schemes;
    const std::vector<Strategy> strategies =
        spec.strategies.empty() ? std::vector<Strategy>{spec.base.strategy} : spec.strategies;

    std::vector<BerRecord> out;
    for (const auto& name : schemes) {
        for (Strategy strategy : strategies) {
            for (double value : spec.values) {
                ScenarioConfig cfg = spec.base;
                if (name != spec.base.scheme) {
                    cfg.scheme = name;
                    cfg.modulation.reset();
                    cfg.code_rate.reset();
                    cfg.relays.reset();
                }
                cfg.strategy = strategy;
                if (spec.variable == SweepVariable::n_relays) {
                    if (!(value >= 1.0) || value != std::floor(value)) {
                        throw ConfigError("relay counts must be positive integers");
                    }
                    cfg.geometry.n_relays = static_cast<std::size_t>(value);
                } else {
                    cfg.ps_db = value;
                }
                out.push_back(run_point(cfg));
            }
        }
    }
    return out;
}

} // namespace coopmimo

#endif // COOPMIMO_SIMULATION_HPP
