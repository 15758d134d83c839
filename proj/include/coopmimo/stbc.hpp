#ifndef COOPMIMO_STBC_HPP
#define COOPMIMO_STBC_HPP

#include "coopmimo/errors.hpp"
#include "coopmimo/relay.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coopmimo {

namespace golden {

inline const double theta = (1.0 + std::sqrt(5.0)) / 2.0;
inline const double theta_bar = 1.0 - theta;
inline const std::complex<double> alpha{1.0, 1.0 - theta};
inline const std::complex<double> alpha_bar{1.0, 1.0 - theta_bar};

} // namespace golden

enum class SchemeKind { alamouti, golden, dlst };

// One contribution coef * s or coef * conj(s) of source symbol `symbol` to codeword entry (row, col).
struct DispersionTerm {
    unsigned row = 0;
    unsigned col = 0;
    unsigned symbol = 0;
    std::complex<double> coef;
    bool conjugate = false;
};

// Linear-dispersion space-time block code W = sum_q Re(s_q) U_q + Im(s_q) V_q.
// Dispersion matrices are stored already scaled so that E||W||_F^2 = T for unit-energy
// symbols: the R relays share one unit of power per channel use.
class StbcScheme {
public:
    static StbcScheme alamouti()
    {
        const std::vector<DispersionTerm> terms{
            {0, 0, 0, {1.0, 0.0}, false},
            {0, 1, 1, {-1.0, 0.0}, true},
            {1, 0, 1, {1.0, 0.0}, false},
            {1, 1, 0, {1.0, 0.0}, true},
        };
        return StbcScheme(SchemeKind::alamouti, "alamouti", 2, 2, 2, terms);
    }

    // 2x2 Golden code with the generator of Belfiore, Rekaya and Viterbo:
    //   1/sqrt(5) [ a(s1 + th s2)       a(s3 + th s4)  ]
    //             [ j ab(s3 + thb s4)   ab(s1 + thb s2) ]
    static StbcScheme golden_code()
    {
        using namespace golden;
        const double k = 1.0 / std::sqrt(5.0);
        const std::complex<double> j{0.0, 1.0};
        const std::vector<DispersionTerm> terms{
            {0, 0, 0, k * alpha, false},
            {0, 0, 1, k * alpha * theta, false},
            {0, 1, 2, k * alpha, false},
            {0, 1, 3, k * alpha * theta, false},
            {1, 0, 2, k * j * alpha_bar, false},
            {1, 0, 3, k * j * alpha_bar * theta_bar, false},
            {1, 1, 0, k * alpha_bar, false},
            {1, 1, 1, k * alpha_bar * theta_bar, false},
        };
        return StbcScheme(SchemeKind::golden, "golden", 2, 2, 4, terms);
    }

    // Double-layer code for four relays: an Alamouti arrangement of Golden-type 2x2 blocks.
    // Entry (i, t) is c * (s_a + k s_b) or c * (s_a^* + k s_b^*), all over sqrt(5).
    static StbcScheme dlst()
    {
        using namespace golden;
        const double k = 1.0 / std::sqrt(5.0);
        const std::complex<double> j{0.0, 1.0};
        const auto a = alpha;
        const auto ab = alpha_bar;
        const auto ac = std::conj(alpha);
        const auto abc = std::conj(alpha_bar);

        std::vector<DispersionTerm> terms;
        auto pair = [&](unsigned row, unsigned col, std::complex<double> c, unsigned sa, double mult, bool conj) {
            terms.push_back({row, col, sa, k * c, conj});
            terms.push_back({row, col, sa + 1, k * c * mult, conj});
        };
        // symbols are 0-based: s1 -> 0, s2 -> 1, ...
        pair(0, 0, a, 0, theta_bar, false);
        pair(0, 1, a, 2, theta_bar, false);
        pair(0, 2, a, 4, theta_bar, false);
        pair(0, 3, a, 6, theta_bar, false);

        pair(1, 0, j * ab, 2, theta_bar, false);
        pair(1, 1, ab, 0, theta_bar, false);
        pair(1, 2, j * ab, 6, theta_bar, false);
        pair(1, 3, ab, 4, theta_bar, false);

        pair(2, 0, -ac, 4, theta, true);
        pair(2, 1, -ac, 6, theta, true);
        pair(2, 2, ac, 0, theta, true);
        pair(2, 3, ac, 2, theta, true);

        pair(3, 0, j * abc, 6, theta, true);
        pair(3, 1, -abc, 4, theta, true);
        pair(3, 2, -j * abc, 0, theta, true);
        pair(3, 3, abc, 2, theta, true);

        return StbcScheme(SchemeKind::dlst, "dlst", 4, 4, 8, terms);
    }

    static StbcScheme from_name(std::string_view name)
    {
        if (name == "alamouti") {
            return alamouti();
        }
        if (name == "golden") {
            return golden_code();
        }
        if (name == "dlst") {
            return dlst();
        }
        throw ConfigError("unknown space-time scheme '" + std::string(name) + "'");
    }

    SchemeKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    std::size_t relays() const noexcept { return relays_; }
    std::size_t periods() const noexcept { return periods_; }
    std::size_t symbols() const noexcept { return symbols_; }
    double rate() const noexcept { return static_cast<double>(symbols_) / static_cast<double>(periods_); }

    // Factor applied to the raw code matrix to reach unit power per channel use.
    double power_scale() const noexcept { return power_scale_; }

    const Eigen::MatrixXcd& U(std::size_t q) const { return u_.at(q); }
    const Eigen::MatrixXcd& V(std::size_t q) const { return v_.at(q); }

private:
    StbcScheme(SchemeKind kind, std::string name, std::size_t r, std::size_t t, std::size_t q,
               const std::vector<DispersionTerm>& terms)
        : kind_(kind), name_(std::move(name)), relays_(r), periods_(t), symbols_(q)
    {
        const std::complex<double> j{0.0, 1.0};
        u_.assign(q, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)));
        v_ = u_;
        for (const auto& term : terms) {
            u_[term.symbol](term.row, term.col) += term.coef;
            v_[term.symbol](term.row, term.col) += term.conjugate ? -j * term.coef : j * term.coef;
        }
        double energy = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            energy += 0.5 * (u_[i].squaredNorm() + v_[i].squaredNorm());
        }
        power_scale_ = std::sqrt(static_cast<double>(t) / energy);
        for (std::size_t i = 0; i < q; ++i) {
            u_[i] *= power_scale_;
            v_[i] *= power_scale_;
        }
    }

    SchemeKind kind_;
    std::string name_;
    std::size_t relays_;
    std::size_t periods_;
    std::size_t symbols_;
    double power_scale_ = 1.0;
    std::vector<Eigen::MatrixXcd> u_;
    std::vector<Eigen::MatrixXcd> v_;
};

// (R, T) codeword for Q input symbols, power-normalized.
inline Eigen::MatrixXcd encode_block(std::span<const std::complex<double>> inputs, const StbcScheme& scheme)
{
    if (inputs.size() != scheme.symbols()) {
        throw FramingError(scheme.name() + " expects " + std::to_string(scheme.symbols()) + " symbols per block, got " +
                           std::to_string(inputs.size()));
    }
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(scheme.relays()),
                                                static_cast<Eigen::Index>(scheme.periods()));
    for (std::size_t q = 0; q < inputs.size(); ++q) {
        w += inputs[q].real() * scheme.U(q) + inputs[q].imag() * scheme.V(q);
    }
    return w;
}

// ---- real-valued stacking: [Re_1, Im_1, Re_2, Im_2, ...], matrices row-major ----

inline Eigen::VectorXd stack_vector(const Eigen::VectorXcd& v)
{
    Eigen::VectorXd out(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(2 * i) = v(i).real();
        out(2 * i + 1) = v(i).imag();
    }
    return out;
}

inline Eigen::VectorXd stack_matrix(const Eigen::MatrixXcd& m)
{
    Eigen::VectorXd out(2 * m.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out(k++) = m(r, c).real();
            out(k++) = m(r, c).imag();
        }
    }
    return out;
}

inline Eigen::VectorXcd unstack_vector(const Eigen::VectorXd& v)
{
    if (v.size() % 2 != 0) {
        throw FramingError("stacked vector must have even length");
    }
    Eigen::VectorXcd out(v.size() / 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) = {v(2 * i), v(2 * i + 1)};
    }
    return out;
}

inline Eigen::MatrixXcd unstack_matrix(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols)
{
    if (v.size() != 2 * rows * cols) {
        throw FramingError("stacked vector does not match the requested matrix shape");
    }
    Eigen::MatrixXcd out(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            out(r, c) = {v(k), v(k + 1)};
            k += 2;
        }
    }
    return out;
}

// 2x2 real block of complex multiplication by h.
inline Eigen::Matrix2d complex_block(std::complex<double> h)
{
    Eigen::Matrix2d b;
    b << h.real(), -h.imag(), h.imag(), h.real();
    return b;
}

// F (2RT, 2RQ): maps the stacked per-relay encoder inputs [y_1 ... y_R] to the stacked
// composite codeword, where row r of the codeword comes from relay r's own input.
inline Eigen::MatrixXd build_F(const StbcScheme& scheme)
{
    const auto R = static_cast<Eigen::Index>(scheme.relays());
    const auto T = static_cast<Eigen::Index>(scheme.periods());
    const auto Q = static_cast<Eigen::Index>(scheme.symbols());
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * R * T, 2 * R * Q);
    for (Eigen::Index r = 0; r < R; ++r) {
        for (Eigen::Index t = 0; t < T; ++t) {
            const Eigen::Index row = 2 * (r * T + t);
            for (Eigen::Index q = 0; q < Q; ++q) {
                const Eigen::Index col = 2 * (r * Q + q);
                const auto u = scheme.U(static_cast<std::size_t>(q))(r, t);
                const auto v = scheme.V(static_cast<std::size_t>(q))(r, t);
                f(row, col) = u.real();
                f(row, col + 1) = v.real();
                f(row + 1, col) = u.imag();
                f(row + 1, col + 1) = v.imag();
            }
        }
    }
    return f;
}

// G (2MT, 2RT): block (j, r) repeats the 2x2 real form of H(j, r) along its diagonal,
// the channel being constant over the T periods.
inline Eigen::MatrixXd build_G(const Eigen::MatrixXcd& h_relay_dest, std::size_t periods)
{
    const Eigen::Index M = h_relay_dest.rows();
    const Eigen::Index R = h_relay_dest.cols();
    const auto T = static_cast<Eigen::Index>(periods);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * M * T, 2 * R * T);
    for (Eigen::Index j = 0; j < M; ++j) {
        for (Eigen::Index r = 0; r < R; ++r) {
            const Eigen::Matrix2d b = complex_block(h_relay_dest(j, r));
            for (Eigen::Index t = 0; t < T; ++t) {
                g.block<2, 2>(2 * (j * T + t), 2 * (r * T + t)) = b;
            }
        }
    }
    return g;
}

// Diagonal of B (2RT): relay r's receive amplitude sqrt(P(r,d)) on all 2T of its entries.
inline Eigen::VectorXd build_B(std::span<const double> p_relay_dest_linear, std::size_t periods)
{
    const auto T = static_cast<Eigen::Index>(periods);
    Eigen::VectorXd b(2 * T * static_cast<Eigen::Index>(p_relay_dest_linear.size()));
    for (std::size_t r = 0; r < p_relay_dest_linear.size(); ++r) {
        b.segment(2 * T * static_cast<Eigen::Index>(r), 2 * T).setConstant(std::sqrt(p_relay_dest_linear[r]));
    }
    return b;
}

// H^eq (2RQ, 2Q): stacked x -> stacked relay inputs, one 2x2 block per (relay, symbol).
inline Eigen::MatrixXd build_Heq(std::span<const AfGain> gains, std::size_t symbols)
{
    const auto R = static_cast<Eigen::Index>(gains.size());
    const auto Q = static_cast<Eigen::Index>(symbols);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * R * Q, 2 * Q);
    for (Eigen::Index r = 0; r < R; ++r) {
        const Eigen::Matrix2d b = complex_block(gains[static_cast<std::size_t>(r)].h_eq);
        for (Eigen::Index q = 0; q < Q; ++q) {
            h.block<2, 2>(2 * (r * Q + q), 2 * q) = b;
        }
    }
    return h;
}

// H^nor (2RQ, 2RQ): diagonal, relay r's real noise gain repeated over its 2Q entries.
inline Eigen::MatrixXd build_Hnor(std::span<const AfGain> gains, std::size_t symbols)
{
    const auto R = static_cast<Eigen::Index>(gains.size());
    const auto Q = static_cast<Eigen::Index>(symbols);
    Eigen::VectorXd d(2 * R * Q);
    for (Eigen::Index r = 0; r < R; ++r) {
        d.segment(2 * Q * r, 2 * Q).setConstant(gains[static_cast<std::size_t>(r)].h_nor);
    }
    return d.asDiagonal();
}

struct EquivalentChannel {
    Eigen::MatrixXd geq;           // (2MT, 2Q)
    Eigen::MatrixXd noise_shaping; // (2MT, 2RQ): maps stacked relay noise into y_d
};

// Geq = G B F H^eq and the relay-noise shaping G B F H^nor, by dense products.
inline EquivalentChannel build_Geq(const Eigen::MatrixXd& G, const Eigen::VectorXd& B, const Eigen::MatrixXd& F,
                                   std::span<const AfGain> gains)
{
    if (G.cols() != B.size() || B.size() != F.rows() || F.cols() % (2 * static_cast<Eigen::Index>(gains.size())) != 0 ||
        gains.empty()) {
        throw std::logic_error("build_Geq: factor dimensions do not conform");
    }
    const auto Q = static_cast<std::size_t>(F.cols() / (2 * static_cast<Eigen::Index>(gains.size())));
    const Eigen::MatrixXd gbf = G * B.asDiagonal() * F;
    return {gbf * build_Heq(gains, Q), gbf * build_Hnor(gains, Q)};
}

// Same matrices as build_Geq, column by column from the dispersion matrices without
// forming the sparse intermediate factors.
inline EquivalentChannel equivalent_channel(const StbcScheme& scheme, const Eigen::MatrixXcd& h_relay_dest,
                                            std::span<const double> p_relay_dest_linear, std::span<const AfGain> gains)
{
    const auto R = static_cast<Eigen::Index>(scheme.relays());
    const auto T = static_cast<Eigen::Index>(scheme.periods());
    const auto Q = static_cast<Eigen::Index>(scheme.symbols());
    const Eigen::Index M = h_relay_dest.rows();
    if (h_relay_dest.cols() != R || static_cast<Eigen::Index>(gains.size()) != R ||
        static_cast<Eigen::Index>(p_relay_dest_linear.size()) != R) {
        throw std::logic_error("equivalent_channel: relay count does not match the scheme");
    }
    EquivalentChannel out{Eigen::MatrixXd::Zero(2 * M * T, 2 * Q), Eigen::MatrixXd::Zero(2 * M * T, 2 * R * Q)};

    // hb(j, r) = H(j, r) sqrt(P(r, d))
    Eigen::MatrixXcd hb(M, R);
    for (Eigen::Index r = 0; r < R; ++r) {
        hb.col(r) = h_relay_dest.col(r) * std::sqrt(p_relay_dest_linear[static_cast<std::size_t>(r)]);
    }
    const std::complex<double> unit[2] = {{1.0, 0.0}, {0.0, 1.0}};
    for (Eigen::Index q = 0; q < Q; ++q) {
        const auto& U = scheme.U(static_cast<std::size_t>(q));
        const auto& V = scheme.V(static_cast<std::size_t>(q));
        for (int part = 0; part < 2; ++part) {
            const Eigen::Index p = 2 * q + part;
            for (Eigen::Index r = 0; r < R; ++r) {
                const std::complex<double> c_sig = gains[static_cast<std::size_t>(r)].h_eq * unit[part];
                const std::complex<double> c_noise = gains[static_cast<std::size_t>(r)].h_nor * unit[part];
                const Eigen::Index noise_col = 2 * (r * Q + q) + part;
                for (Eigen::Index t = 0; t < T; ++t) {
                    const std::complex<double> w_sig = c_sig.real() * U(r, t) + c_sig.imag() * V(r, t);
                    const std::complex<double> w_noise = c_noise.real() * U(r, t) + c_noise.imag() * V(r, t);
                    for (Eigen::Index j = 0; j < M; ++j) {
                        const std::complex<double> ys = hb(j, r) * w_sig;
                        const std::complex<double> yn = hb(j, r) * w_noise;
                        const Eigen::Index row = 2 * (j * T + t);
                        out.geq(row, p) += ys.real();
                        out.geq(row + 1, p) += ys.imag();
                        out.noise_shaping(row, noise_col) = yn.real();
                        out.noise_shaping(row + 1, noise_col) = yn.imag();
                    }
                }
            }
        }
    }
    return out;
}

} // namespace coopmimo

#endif // COOPMIMO_STBC_HPP
