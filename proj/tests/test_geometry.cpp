#include "coopmimo/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace coopmimo;

namespace {

RelaySet relays_at(const std::vector<Position>& pts)
{
    RelaySet set;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        set.relays.push_back({static_cast<int>(i), pts[i]});
    }
    return set;
}

RelaySet uniform_relays(std::size_t n, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    std::vector<Position> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({u(rng), u(rng)});
    }
    return relays_at(pts);
}

} // namespace

TEST(Distance, ThreeFourFiveTriangle)
{
    EXPECT_NEAR(distance_relay_to_mt({0, 0}, {3, 0}, {3, 4}), 4.0, 1e-12);
}

TEST(Distance, ColocatedRelayAndTerminal)
{
    EXPECT_NEAR(distance_relay_to_mt({0, 0}, {5, 0}, {5, 0}), 0.0, 1e-12);
}

TEST(Distance, MatchesEuclideanNorm)
{
    EXPECT_NEAR(distance_relay_to_mt({0, 0}, {100, 0}, {40, 30}), std::hypot(60.0, 30.0), 1e-9);
    EXPECT_NEAR(distance_relay_to_mt({0, 0}, {100, 0}, {40, 30}), 67.08203932, 1e-6);
}

TEST(Distance, LawOfCosinesAgreesWithEuclideanEverywhere)
{
    SplitMix64 rng(7);
    std::uniform_real_distribution<double> u(-800.0, 800.0);
    for (int i = 0; i < 10000; ++i) {
        const Position bs{u(rng), u(rng)};
        const Position r{u(rng), u(rng)};
        const Position m{u(rng), u(rng)};
        EXPECT_NEAR(distance_relay_to_mt(bs, r, m), euclidean(r, m), 1e-7);
    }
    // degenerate: relay or MT on the BS
    EXPECT_DOUBLE_EQ(distance_relay_to_mt({1, 1}, {1, 1}, {4, 5}), 5.0);
    EXPECT_DOUBLE_EQ(distance_relay_to_mt({1, 1}, {4, 5}, {1, 1}), 5.0);
}

TEST(PiSelection, NearestTwoOnALine)
{
    const RelaySet set = relays_at({{10, 0}, {50, 0}, {90, 0}});
    const SelectionResult sel = select_relays_pi(set, {0, 0}, {95, 0}, 2);
    EXPECT_EQ(sel.relay_ids, (std::vector<int>{2, 1}));
    EXPECT_NEAR(sel.distances_to_mt[0], 5.0, 1e-12);
    EXPECT_NEAR(sel.distances_to_mt[1], 45.0, 1e-12);
}

TEST(PiSelection, WholeSetWhenRequestingAll)
{
    const RelaySet set = uniform_relays(17, 3);
    const SelectionResult sel = select_relays_pi(set, {0, 0}, {12, -40}, 17);
    std::vector<int> ids = sel.relay_ids;
    std::sort(ids.begin(), ids.end());
    std::vector<int> all(17);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(ids, all);
}

TEST(PiSelection, MatchesBruteForceSort)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RelaySet set = uniform_relays(200, seed);
        const Position mt{-120.0 + 10.0 * static_cast<double>(seed), 33.0};
        std::vector<std::pair<double, int>> all;
        for (const auto& r : set.relays) {
            all.emplace_back(euclidean(r.position, mt), r.id);
        }
        std::sort(all.begin(), all.end());
        const SelectionResult sel = select_relays_pi(set, {0, 0}, mt, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_EQ(sel.relay_ids[i], all[i].second);
        }
    }
}

TEST(PiSelection, TiesBrokenByLowestId)
{
    // four relays on a circle around the MT
    const RelaySet set = relays_at({{10, 0}, {0, 10}, {-10, 0}, {0, -10}, {50, 50}});
    const SelectionResult sel = select_relays_pi(set, {100, 100}, {0, 0}, 2);
    EXPECT_EQ(sel.relay_ids, (std::vector<int>{0, 1}));
}

TEST(PiSelection, TooManyRequestedIsConfigError)
{
    EXPECT_THROW(select_relays_pi(uniform_relays(3, 1), {0, 0}, {0, 0}, 4), ConfigError);
}

TEST(RandomSelection, WholeSetAndDeterminism)
{
    const RelaySet set = uniform_relays(12, 5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::vector<int> ids = select_relays_random(set, 12, seed).relay_ids;
        std::sort(ids.begin(), ids.end());
        EXPECT_EQ(ids.front(), 0);
        EXPECT_EQ(ids.back(), 11);
        EXPECT_EQ(std::set<int>(ids.begin(), ids.end()).size(), 12u);
    }
    EXPECT_EQ(select_relays_random(set, 4, 99).relay_ids, select_relays_random(set, 4, 99).relay_ids);
}

TEST(RandomSelection, UniformInclusionCounts)
{
    const RelaySet set = uniform_relays(10, 2);
    constexpr int draws = 100000;
    std::vector<int> counts(10, 0);
    for (int d = 0; d < draws; ++d) {
        const auto sel = select_relays_random(set, 2, derive_seed(11, {static_cast<std::uint64_t>(d)}));
        ASSERT_NE(sel.relay_ids[0], sel.relay_ids[1]);
        for (int id : sel.relay_ids) {
            ++counts[static_cast<std::size_t>(id)];
        }
    }
    const double p = 0.2;
    const double mean = draws * p;
    const double sd = std::sqrt(draws * p * (1 - p));
    for (int c : counts) {
        EXPECT_LT(std::abs(c - mean), 3.0 * sd);
    }
}

TEST(Trajectory, SampleCountAndSpacing)
{
    GeometryConfig cfg;
    const auto [relays, traj] = sample_trajectory(cfg, 1);
    ASSERT_EQ(traj.samples.size(), 101u);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        EXPECT_NEAR(traj.samples[i].x - traj.samples[i - 1].x, 10.0, 1e-12);
        EXPECT_EQ(traj.samples[i].y, traj.samples[0].y);
    }
    EXPECT_EQ(relays.size(), 100u);
    EXPECT_DOUBLE_EQ(traj.tunnel_depth(59), 0.0);
    EXPECT_DOUBLE_EQ(traj.tunnel_depth(60), 0.0);
    EXPECT_DOUBLE_EQ(traj.tunnel_depth(65), 50.0);
    EXPECT_DOUBLE_EQ(traj.tunnel_depth(80), 200.0);
    EXPECT_DOUBLE_EQ(traj.tunnel_depth(81), 0.0);
}

TEST(Trajectory, RelaysInsideDiscAndOutsideCorridor)
{
    GeometryConfig cfg;
    cfg.n_relays = 2000;
    const auto [relays, traj] = sample_trajectory(cfg, 9);
    for (const auto& r : relays.relays) {
        EXPECT_LE(euclidean(r.position, cfg.base_station), cfg.cell_diameter / 2.0);
        EXPECT_FALSE(inside_tunnel_corridor(cfg, r.position));
    }
    std::set<int> ids;
    for (const auto& r : relays.relays) {
        ids.insert(r.id);
    }
    EXPECT_EQ(ids.size(), 2000u);
}

TEST(Trajectory, RelayCentroidNearCellCenter)
{
    GeometryConfig cfg;
    cfg.n_relays = 10000;
    cfg.tunnel_length = 0.0; // no exclusion zone, so the placement is symmetric
    const auto [relays, traj] = sample_trajectory(cfg, 4);
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& r : relays.relays) {
        sx += r.position.x;
        sy += r.position.y;
    }
    const double n = static_cast<double>(relays.size());
    // per-axis sd of a uniform disc point is R/2
    const double se = (cfg.cell_diameter / 4.0) / std::sqrt(n);
    EXPECT_LT(std::abs(sx / n), 3.0 * se);
    EXPECT_LT(std::abs(sy / n), 3.0 * se);
}

TEST(Trajectory, LargerNetworksExtendSmallerOnes)
{
    GeometryConfig small;
    small.n_relays = 10;
    GeometryConfig large = small;
    large.n_relays = 200;
    const auto a = sample_trajectory(small, 3).first;
    const auto b = sample_trajectory(large, 3).first;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.relays[i].position, b.relays[i].position);
    }
}

TEST(GeometryConfig, RejectsBadParameters)
{
    GeometryConfig cfg;
    cfg.n_relays = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.update_step = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.tunnel_start = 900.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}
