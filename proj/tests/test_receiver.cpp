#include "coopmimo/receiver.hpp"
#include "coopmimo/simulation.hpp"
#include "coopmimo/validation.hpp"

#include <gtest/gtest.h>

using namespace coopmimo;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXd random_real(SplitMix64& rng, Eigen::Index r, Eigen::Index c)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd m(r, c);
    for (auto& v : m.reshaped()) {
        v = n(rng);
    }
    return m;
}

Eigen::MatrixXd alamouti_geq(SplitMix64& rng)
{
    Eigen::MatrixXcd h(2, 2);
    for (auto& c : h.reshaped()) {
        c = complex_gaussian(rng);
    }
    const std::vector<AfGain> gains{{{0.8, 0.0}, 0.1}, {{0.5, 0.0}, 0.2}};
    return equivalent_channel(StbcScheme::alamouti(), h, std::vector<double>{1.0, 2.0}, gains).geq;
}

} // namespace

TEST(Phase1, SingleUnitAntennaIsExact)
{
    const cd x(0.3, -0.9);
    const cd u[1] = {x};
    const cd h[1] = {cd(1, 0)};
    const Phase1Estimate e = phase1_detect(u, h, 1.0, 0.0);
    EXPECT_TRUE(e.usable);
    EXPECT_NEAR(std::abs(e.estimate - x), 0.0, 1e-15);
}

TEST(Phase1, SnrAddsOverAntennas)
{
    const cd u1[1] = {cd(1, 0)};
    const cd h1[1] = {cd(1, 0)};
    const cd u2[2] = {cd(1, 0), cd(1, 0)};
    const cd h2[2] = {cd(1, 0), cd(1, 0)};
    EXPECT_NEAR(phase1_detect(u2, h2, 0.5, 0.1).rho1, 2.0 * phase1_detect(u1, h1, 0.5, 0.1).rho1, 1e-12);
    EXPECT_NEAR(phase1_detect(u1, h1, 0.5, 0.1).rho1, 5.0, 1e-12);
}

TEST(Phase1, MatchesLeastSquares)
{
    SplitMix64 rng(20);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXcd h(3);
        Eigen::VectorXcd u(3);
        for (Eigen::Index j = 0; j < 3; ++j) {
            h(j) = complex_gaussian(rng);
            u(j) = complex_gaussian(rng);
        }
        const double p = 0.7;
        const Eigen::MatrixXcd a = std::sqrt(p) * h;
        const cd ls = a.colPivHouseholderQr().solve(u)(0);
        const auto e = phase1_detect({u.data(), 3}, {h.data(), 3}, p, 1.0);
        EXPECT_NEAR(std::abs(e.estimate - ls), 0.0, 1e-12);
    }
}

TEST(Phase1, DeadDirectLinkIsUnusable)
{
    const cd u[2] = {cd(1, 0), cd(0, 1)};
    const cd h[2] = {cd(0, 0), cd(0, 0)};
    EXPECT_FALSE(phase1_detect(u, h, 1.0, 1.0).usable);
    EXPECT_FALSE(phase1_detect(u, u, 0.0, 1.0).usable);
    EXPECT_THROW(phase1_detect(u, std::span<const cd>(h, 1), 1.0, 1.0), FramingError);
}

TEST(Mmse, ZeroForcingLimit)
{
    SplitMix64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const Eigen::MatrixXd g = random_real(rng, 8, 8);
        const Eigen::VectorXd y = random_real(rng, 8, 1);
        const Eigen::VectorXd zf = g.fullPivLu().solve(y);
        const MmseEstimate e = mmse_detect(y, g, 0.0);
        EXPECT_LT((e.estimates - zf).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + zf.cwiseAbs().maxCoeff()));
    }
}

TEST(Mmse, IdentityChannelShrinks)
{
    const Eigen::VectorXd x = (Eigen::VectorXd(4) << 1.0, -2.0, 0.5, 3.0).finished();
    for (double s2 : {0.1, 1.0, 4.0}) {
        const MmseEstimate e = mmse_detect(x, Eigen::MatrixXd::Identity(4, 4), s2);
        EXPECT_LT((e.estimates - x / (1.0 + s2)).cwiseAbs().maxCoeff(), 1e-11);
        EXPECT_NEAR(e.bias(0), 1.0 / (1.0 + s2), 1e-11);
    }
}

TEST(Mmse, AlamoutiIsScaledMatchedFilter)
{
    SplitMix64 rng(22);
    for (int i = 0; i < 200; ++i) {
        const Eigen::MatrixXd g = alamouti_geq(rng);
        const Eigen::VectorXd y = random_real(rng, g.rows(), 1);
        const Eigen::VectorXd mf = g.transpose() * y;
        const Eigen::VectorXd est = mmse_detect(y, g, 0.3).estimates;
        const Eigen::Index k = mf.cwiseAbs().maxCoeff() > 0 ? 0 : 1;
        const double c = est(k) / mf(k);
        EXPECT_GT(c, 0.0);
        EXPECT_LT((est - c * mf).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Mmse, FullCovarianceWithWhiteNoiseMatchesScalar)
{
    SplitMix64 rng(23);
    const Eigen::MatrixXd g = random_real(rng, 8, 6);
    const Eigen::VectorXd y = random_real(rng, 8, 1);
    const auto a = mmse_detect(y, g, 0.4);
    const auto b = mmse_detect(y, g, Eigen::MatrixXd(0.4 * Eigen::MatrixXd::Identity(8, 8)));
    EXPECT_LT((a.estimates - b.estimates).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(mmse_detect(y, g, -1.0), DomainError);
    EXPECT_THROW(mmse_detect(Eigen::VectorXd::Zero(3), g, 0.1), FramingError);
}

TEST(Pic, PerfectFeedbackIsExact)
{
    const auto check = validation::check_exact_pic(300, 24);
    EXPECT_TRUE(check.passed) << check.detail;
}

TEST(Pic, ZeroFeedbackIsMatchedFilterOverNorm)
{
    SplitMix64 rng(25);
    const Eigen::MatrixXd g = random_real(rng, 16, 16);
    const Eigen::VectorXd y = random_real(rng, 16, 1);
    const Eigen::VectorXd out = pic_detect(y, g, Eigen::VectorXd::Zero(16));
    for (Eigen::Index p = 0; p < 16; ++p) {
        EXPECT_NEAR(out(p), g.col(p).dot(y) / g.col(p).squaredNorm(), 1e-12);
        EXPECT_NEAR(*pic_iterate(y, g, Eigen::VectorXd::Zero(16), p), out(p), 1e-12);
    }
}

TEST(Pic, LinearResponseToOneWrongEntry)
{
    SplitMix64 rng(26);
    const Eigen::MatrixXd g = random_real(rng, 8, 8);
    const Eigen::VectorXd x = random_real(rng, 8, 1);
    const Eigen::VectorXd y = g * x;
    const Eigen::Index wrong = 3;
    const double delta = 0.37;
    Eigen::VectorXd fb = x;
    fb(wrong) += delta;
    for (Eigen::Index p = 0; p < 8; ++p) {
        if (p == wrong) {
            continue;
        }
        const double expected = -g.col(p).dot(g.col(wrong)) / g.col(p).squaredNorm() * delta;
        EXPECT_NEAR(*pic_iterate(y, g, fb, p) - x(p), expected, 1e-12);
    }
    EXPECT_NEAR(*pic_iterate(y, g, fb, wrong), x(wrong), 1e-12);
}

TEST(Pic, ZeroColumnHasNoEstimate)
{
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    g(2, 2) = 0.0;
    const Eigen::VectorXd fb = Eigen::VectorXd::Constant(4, 0.5);
    EXPECT_FALSE(pic_iterate(Eigen::VectorXd::Ones(4), g, fb, 2).has_value());
    EXPECT_EQ(pic_detect(Eigen::VectorXd::Ones(4), g, fb)(2), 0.5);
    EXPECT_THROW(pic_iterate(Eigen::VectorXd::Ones(4), g, fb, 4), FramingError);
}

// On an orthogonal code PIC has nothing to cancel: any feedback gives the matched filter.
TEST(Pic, AlamoutiIgnoresFeedback)
{
    SplitMix64 rng(27);
    for (int i = 0; i < 50; ++i) {
        const Eigen::MatrixXd g = alamouti_geq(rng);
        const Eigen::VectorXd y = random_real(rng, g.rows(), 1);
        const Eigen::VectorXd a = pic_detect(y, g, Eigen::VectorXd::Zero(4));
        const Eigen::VectorXd b = pic_detect(y, g, random_real(rng, 4, 1));
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Combine, Properties)
{
    const cd x1(1.0, 2.0);
    const cd x2(-3.0, 0.5);
    EXPECT_EQ(combine_phases(x1, x2, {0.0, 2.0}), x2);
    EXPECT_NEAR(std::abs(combine_phases(x1, x2, {1.5, 1.5}) - 0.5 * (x1 + x2)), 0.0, 1e-15);
    for (double r1 : {0.1, 1.0, 50.0}) {
        for (double r2 : {0.0, 3.0, 1e4}) {
            EXPECT_NEAR(std::abs(combine_phases(x1, x1, {r1, r2}) - x1), 0.0, 1e-14);
        }
    }
    EXPECT_THROW(combine_phases(x1, x2, {0.0, 0.0}), NoSignalError);
}

TEST(IterativeReceiver, NoiselessFrameWithoutDirectLink)
{
    SplitMix64 rng(28);
    for (const auto& scheme : {StbcScheme::alamouti(), StbcScheme::golden_code(), StbcScheme::dlst()}) {
        const EtaRow row = eta4_row(scheme.kind());
        const FrameLayout layout = FrameLayout::make(scheme, row.modulation, row.rate, 4, 99);
        std::vector<Bit> info(layout.info_bits);
        for (auto& b : info) {
            b = static_cast<Bit>(rng() & 1u);
        }
        const auto coded = layout.interleaver.interleave<Bit>(conv_encode(info, layout.code));
        const auto symbols = qam_map(coded, layout.constellation);
        const auto Q = static_cast<Eigen::Index>(scheme.symbols());
        const auto R = static_cast<Eigen::Index>(scheme.relays());
        std::vector<BlockObservation> blocks;
        for (std::size_t b = 0; b < layout.blocks; ++b) {
            Eigen::MatrixXcd h(2, R);
            for (auto& c : h.reshaped()) {
                c = complex_gaussian(rng);
            }
            std::vector<AfGain> gains;
            for (Eigen::Index r = 0; r < R; ++r) {
                gains.push_back(af_gain(1.0, complex_gaussian(rng), 0.0));
            }
            BlockObservation obs;
            obs.channel = equivalent_channel(scheme, h, std::vector<double>(static_cast<std::size_t>(R), 1.0), gains);
            const Eigen::Map<const Eigen::VectorXcd> x(symbols.data() + b * scheme.symbols(), Q);
            obs.yd = obs.channel.geq * stack_vector(x);
            obs.u = Eigen::MatrixXcd::Zero(2, Q);
            obs.h_sd = Eigen::VectorXcd::Zero(2);
            blocks.push_back(obs);
        }
        const ReceiveResult rr = iterative_receive(blocks, 0.0, layout, ReceiverConfig{3});
        ASSERT_EQ(rr.decisions.size(), 3u);
        for (const auto& d : rr.decisions) {
            EXPECT_EQ(d, info) << scheme.name();
        }
        EXPECT_THROW(iterative_receive(std::span(blocks).first(1), 0.0, layout, ReceiverConfig{1}), FramingError);
        EXPECT_THROW(iterative_receive(blocks, 0.0, layout, ReceiverConfig{0}), ConfigError);
    }
}

TEST(IterativeReceiver, OneIterationIsTheFirstEntryOfLongerRuns)
{
    ScenarioConfig cfg;
    cfg.frames = 202;
    cfg.sigma2 = std::pow(10.0, -13.0);
    cfg.iterations = 3;
    const PointResult three = simulate_point(cfg);
    cfg.iterations = 1;
    const PointResult one = simulate_point(cfg);
    ASSERT_EQ(three.errors_per_iteration.size(), 3u);
    EXPECT_EQ(one.errors_per_iteration.at(0), three.errors_per_iteration.at(0));
    EXPECT_GT(one.record.bit_errors, 0u);
}

TEST(IterativeReceiver, IterationsHelpDlstAtModerateNoise)
{
    ScenarioConfig cfg;
    cfg.frames = 1010;
    cfg.sigma2 = std::pow(10.0, -13.5);
    const PointResult r = simulate_point(cfg);
    EXPECT_LE(r.errors_per_iteration.back(), r.errors_per_iteration.front());
}
