#include "coopmimo/channel.hpp"
#include "coopmimo/relay.hpp"
#include "coopmimo/stbc.hpp"

#include <gtest/gtest.h>

using namespace coopmimo;
using cd = std::complex<double>;

TEST(AfNormalize, IdentityLink)
{
    const auto [out, g] = af_normalize(cd(0.3, -0.4), 1.0, cd(1, 0), 0.0);
    EXPECT_NEAR(std::abs(out - cd(0.3, -0.4)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g.h_eq - cd(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(g.h_nor, 1.0, 1e-15);
}

TEST(AfNormalize, PurePowerScaling)
{
    const auto [out, g] = af_normalize(cd(2.0, 0.0), 4.0, cd(1, 0), 0.0);
    EXPECT_NEAR(std::abs(out - cd(1.0, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g.h_eq - cd(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(g.h_nor, 0.5, 1e-15);
}

TEST(AfNormalize, UnitOutputPower)
{
    SplitMix64 rng(10);
    for (double sigma2 : {0.01, 0.5, 3.0}) {
        const double p = 2.5;
        const cd h = complex_gaussian(rng);
        double acc = 0.0;
        constexpr int n = 100000;
        for (int i = 0; i < n; ++i) {
            const cd x = complex_gaussian(rng);
            const cd y = std::sqrt(p) * h * x + complex_gaussian(rng, sigma2);
            acc += std::norm(af_normalize(y, p, h, sigma2).first);
        }
        EXPECT_NEAR(acc / n, 1.0, 0.01) << "sigma2 " << sigma2;
        const AfGain g = af_gain(p, h, sigma2);
        EXPECT_NEAR(std::norm(g.h_eq) + g.h_nor * g.h_nor * sigma2, 1.0, 1e-12);
    }
}

TEST(AfNormalize, InvalidInputs)
{
    EXPECT_THROW(af_gain(0.0, cd(1, 0), 1.0), DomainError);
    EXPECT_THROW(af_gain(1.0, cd(1, 0), -1.0), DomainError);
    EXPECT_THROW(af_gain(1.0, cd(0, 0), 0.0), DegenerateLinkError);
    EXPECT_NO_THROW(af_gain(1.0, cd(0, 0), 0.1));
}

TEST(RelayRow, AlamoutiSecondRelay)
{
    const auto s = StbcScheme::alamouti();
    const cd x[2] = {cd(1, 2), cd(-3, 0.5)};
    const Eigen::VectorXcd row = relay_transmit_row(encode_block(x, s), 1) / s.power_scale();
    EXPECT_NEAR(std::abs(row(0) - x[1]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(row(1) - std::conj(x[0])), 0.0, 1e-14);
    EXPECT_THROW(relay_transmit_row(encode_block(x, s), 2), std::out_of_range);
}

TEST(RelayRow, IdenticalInputsGiveSingleEncoder)
{
    SplitMix64 rng(11);
    for (const auto& s : {StbcScheme::alamouti(), StbcScheme::golden_code(), StbcScheme::dlst()}) {
        std::vector<cd> x(s.symbols());
        for (auto& v : x) {
            v = complex_gaussian(rng);
        }
        const Eigen::MatrixXcd reference = encode_block(x, s);
        Eigen::MatrixXcd composite(reference.rows(), reference.cols());
        for (std::size_t r = 0; r < s.relays(); ++r) {
            composite.row(static_cast<Eigen::Index>(r)) = relay_transmit_row(encode_block(x, s), r).transpose();
        }
        EXPECT_EQ(composite, reference);
    }
}

// With noisy relay inputs the composite codeword is the noiseless one plus a term that is
// linear in the relay noises.
TEST(RelayRow, NoiseEntersLinearly)
{
    SplitMix64 rng(12);
    const auto s = StbcScheme::dlst();
    const auto R = static_cast<Eigen::Index>(s.relays());
    std::vector<cd> x(s.symbols());
    for (auto& v : x) {
        v = complex_gaussian(rng);
    }
    std::vector<std::vector<cd>> noise(s.relays(), std::vector<cd>(s.symbols()));
    for (auto& n : noise) {
        for (auto& v : n) {
            v = complex_gaussian(rng, 0.2);
        }
    }
    auto composite = [&](double noise_scale) {
        Eigen::MatrixXcd w(R, static_cast<Eigen::Index>(s.periods()));
        for (Eigen::Index r = 0; r < R; ++r) {
            std::vector<cd> in(s.symbols());
            for (std::size_t q = 0; q < in.size(); ++q) {
                in[q] = x[q] + noise_scale * noise[static_cast<std::size_t>(r)][q];
            }
            w.row(r) = relay_transmit_row(encode_block(in, s), static_cast<std::size_t>(r)).transpose();
        }
        return w;
    };
    const Eigen::MatrixXcd clean = composite(0.0);
    const Eigen::MatrixXcd d1 = composite(1.0) - clean;
    const Eigen::MatrixXcd d2 = composite(2.0) - clean;
    EXPECT_GT(d1.cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LT((d2 - 2.0 * d1).cwiseAbs().maxCoeff(), 1e-12);
}
