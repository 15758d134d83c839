#include "coopmimo/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace coopmimo;

TEST(PathLoss, ReferenceDistance)
{
    for (double alpha : {2.0, 3.5, 4.0}) {
        EXPECT_NEAR(path_loss_received_power(0.0, 1.0, alpha).value_db, -32.4, 1e-12);
    }
}

TEST(PathLoss, TenMetersAlphaThreePointFive)
{
    EXPECT_NEAR(path_loss_received_power(0.0, 10.0, 3.5).value_db, -67.4, 1e-12);
    EXPECT_NEAR(path_loss_received_power(2.0, 10.0, 3.5).value_db, -65.4, 1e-12);
}

TEST(PathLoss, DoublingDistance)
{
    for (double d : {1.0, 7.0, 130.0, 999.0}) {
        const double a = path_loss_received_power(0.0, d, 3.5).value_db;
        const double b = path_loss_received_power(0.0, 2.0 * d, 3.5).value_db;
        EXPECT_NEAR(b - a, -35.0 * std::log10(2.0), 1e-10);
    }
}

TEST(PathLoss, NonPositiveDistanceIsDomainError)
{
    EXPECT_THROW(path_loss_received_power(0.0, 0.0, 3.5), DomainError);
    EXPECT_THROW(path_loss_received_power(0.0, -1.0, 3.5), DomainError);
}

TEST(LinkPowerType, DbLinearRoundTrip)
{
    EXPECT_NEAR(LinkPower::from_db(-30.0).linear(), 1e-3, 1e-15);
    EXPECT_NEAR(LinkPower::from_linear(1e-5).value_db, -50.0, 1e-12);
    EXPECT_THROW(LinkPower::from_linear(0.0), DomainError);
}

TEST(Tunnel, ReferencePoints)
{
    EXPECT_DOUBLE_EQ(tunnel_excess_loss(0.0), 0.0);
    EXPECT_DOUBLE_EQ(tunnel_excess_loss(50.0), 15.0);
    EXPECT_NEAR(tunnel_excess_loss(150.0), 21.0, 1e-12);
    EXPECT_NEAR(tunnel_excess_loss(25.0), 7.5, 1e-12);
    EXPECT_DOUBLE_EQ(tunnel_excess_loss(25.0, TunnelModel::step), 15.0);
    EXPECT_THROW(tunnel_excess_loss(-1.0), DomainError);
}

TEST(Tunnel, RampIsContinuousAndMonotone)
{
    double prev = 0.0;
    for (double d = 0.0; d <= 300.0; d += 0.25) {
        const double l = tunnel_excess_loss(d);
        EXPECT_GE(l, prev);
        EXPECT_LE(l - prev, 0.0751); // no jump larger than the steepest slope allows
        prev = l;
    }
}

TEST(Rayleigh, MomentsOverOneMillionDraws)
{
    const auto h = draw_rayleigh(1000000, 17);
    double p = 0.0;
    double re2 = 0.0;
    double im2 = 0.0;
    double re = 0.0;
    for (const auto& v : h) {
        p += std::norm(v);
        re2 += v.real() * v.real();
        im2 += v.imag() * v.imag();
        re += v.real();
    }
    const double n = static_cast<double>(h.size());
    EXPECT_NEAR(p / n, 1.0, 0.005);
    EXPECT_NEAR(re2 / n, 0.5, 0.005);
    EXPECT_NEAR(im2 / n, 0.5, 0.005);
    EXPECT_NEAR(re / n, 0.0, 0.005);
}

TEST(Rayleigh, SameSeedSameSequence)
{
    EXPECT_EQ(draw_rayleigh(100, 5), draw_rayleigh(100, 5));
    EXPECT_NE(draw_rayleigh(100, 5), draw_rayleigh(100, 6));
    EXPECT_THROW(draw_rayleigh(0, 1), DomainError);
}

TEST(Awgn, ZeroVarianceIsExactZero)
{
    for (const auto& v : awgn(64, 0.0, 3)) {
        EXPECT_EQ(v, cplx(0.0, 0.0));
    }
    EXPECT_THROW(awgn(4, -1.0, 3), DomainError);
}

TEST(Awgn, VarianceWithinOnePercent)
{
    for (double s2 : {1e-3, 0.5, 4.0}) {
        const auto n = awgn(1000000, s2, 21);
        double acc = 0.0;
        for (const auto& v : n) {
            acc += std::norm(v);
        }
        EXPECT_NEAR(acc / static_cast<double>(n.size()) / s2, 1.0, 0.01);
    }
}

TEST(Awgn, IndependentSeedsUncorrelated)
{
    const auto a = awgn(100000, 1.0, derive_seed(1, Stream::dest_noise_phase2, {0}));
    const auto b = awgn(100000, 1.0, derive_seed(1, Stream::dest_noise_phase2, {1}));
    cplx c{0.0, 0.0};
    double ea = 0.0;
    double eb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        c += a[i] * std::conj(b[i]);
        ea += std::norm(a[i]);
        eb += std::norm(b[i]);
    }
    EXPECT_LT(std::abs(c) / std::sqrt(ea * eb), 0.01);
}

TEST(Rng, DerivedStreamsAreDistinct)
{
    EXPECT_NE(derive_seed(1, Stream::relay_channel, {0, 0, 3}), derive_seed(1, Stream::relay_channel, {0, 0, 4}));
    EXPECT_NE(derive_seed(1, Stream::relay_channel, {0, 1}), derive_seed(1, Stream::relay_channel, {1, 0}));
    EXPECT_NE(derive_seed(1, Stream::relay_noise), derive_seed(1, Stream::relay_channel));
    EXPECT_EQ(derive_seed(9, Stream::info_bits, {5}), derive_seed(9, Stream::info_bits, {5}));
}
