// SPDX-License-Identifier: Apache-2.0
#include "drastic/pareto.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drastic;

namespace {

std::vector<ObjectivePoint> table_points() {
    return to_points(load_fixture(testing_support::data_path("fixtures/v001_qp22.csv")));
}

} // namespace

TEST(Dominance, Examples) {
    const ObjectivePoint a{"a", 43.0909, 101.921, 4866.88};
    const ObjectivePoint b{"b", 42.952, 104.054, 5111.496};
    EXPECT_TRUE(dominates(a, b));
    EXPECT_FALSE(dominates(b, a));
    EXPECT_FALSE(dominates(a, a));
    const ObjectivePoint c{"c", 41.407, 477.995, 1089.156};
    const ObjectivePoint d{"d", 41.3507, 332.199, 1085.06};
    EXPECT_FALSE(dominates(c, d));
    EXPECT_FALSE(dominates(d, c));
    // better on one axis only is enough
    EXPECT_TRUE(dominates({"x", 40, 10, 10}, {"y", 40, 10, 11}));
}

TEST(Front, SmallCases) {
    EXPECT_TRUE(pareto_front({}).members.empty());
    const std::vector<ObjectivePoint> one{{"S1", 40, 1, 1}};
    EXPECT_EQ(pareto_front(one).members, one);
    EXPECT_EQ(pareto_front(one).source_size, 1u);
    const std::vector<ObjectivePoint> dup{{"S1", 40, 1, 1}, {"S1", 41, 1, 1}};
    EXPECT_THROW(pareto_front(dup), DuplicateId);
}

TEST(Front, TableRows) {
    const auto pts = table_points();
    const auto f = pareto_front(pts);
    EXPECT_EQ(oracle::ids_of(f.members), oracle::front_ids(pts));
    EXPECT_EQ(f.source_size, 20u);
    bool has_best = false;
    for (const auto& p : f.members) {
        EXPECT_FALSE(p.q == 42.952 && p.t == 104.054 && p.r == 5111.496);
        has_best |= p.q == 43.0909 && p.t == 101.921 && p.r == 4866.88;
    }
    EXPECT_TRUE(has_best);
    for (std::size_t i = 1; i < f.members.size(); ++i)
        EXPECT_LT(oracle::id_number(f.members[i - 1].config_id), oracle::id_number(f.members[i].config_id));
}

TEST(Front, DuplicatesKeepLowestId) {
    const std::vector<ObjectivePoint> pts{{"S10", 40, 5, 5}, {"S2", 40, 5, 5}, {"S9", 40, 5, 5}, {"S3", 39, 6, 6}};
    const auto f = pareto_front(pts);
    ASSERT_EQ(f.members.size(), 1u);
    EXPECT_EQ(f.members[0].config_id, "S2");
}

TEST(Front, OracleEquivalenceRandom) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> size(0, 300);
    for (int trial = 0; trial < 60; ++trial) {
        const auto pts = oracle::random_points(rng, size(rng));
        const auto expected = oracle::front_ids(pts);
        EXPECT_EQ(oracle::ids_of(pareto_front(pts).members), expected);
        EXPECT_EQ(oracle::ids_of(pareto_front_serial(pts).members), expected);
    }
}

TEST(Front, Idempotent) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = oracle::random_points(rng, 200);
        const auto f = pareto_front(pts);
        EXPECT_EQ(pareto_front(f.members).members, f.members);
    }
}

TEST(Front, MonotoneTransformInvariance) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = oracle::random_points(rng, 150);
        auto moved = pts;
        for (auto& p : moved) {
            p.q = std::log(p.q) * 3 + 7;
            p.t = std::pow(p.t, 1.5);
            p.r = std::exp(p.r / 1e4) + p.r;
        }
        EXPECT_EQ(oracle::ids_of(pareto_front(moved).members), oracle::ids_of(pareto_front(pts).members));
    }
}

TEST(Front, SupersetStability) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = oracle::random_points(rng, 150);
        const auto full = oracle::ids_of(pareto_front(pts).members);
        std::vector<ObjectivePoint> sub;
        for (const auto& p : pts)
            if (rng() % 3) sub.push_back(p);
        const auto part = oracle::ids_of(pareto_front(sub).members);
        for (const auto& p : sub)
            if (full.count(p.config_id)) EXPECT_TRUE(part.count(p.config_id)) << p.config_id;
    }
}

TEST(Front, IsFront) {
    const auto pts = table_points();
    EXPECT_TRUE(is_front(pts, pareto_front(pts).members));
    EXPECT_FALSE(is_front(pts, pts));
    auto f = pareto_front(pts).members;
    f.pop_back();
    EXPECT_FALSE(is_front(pts, f));

    std::mt19937_64 rng(50);
    const auto random50 = oracle::random_points(rng, 50);
    std::vector<ObjectivePoint> independent;
    const auto ids = oracle::front_ids(random50);
    for (const auto& p : random50)
        if (ids.count(p.config_id)) independent.push_back(p);
    EXPECT_TRUE(is_front(random50, independent));
}

TEST(Front, PerVideoAndFileRoundTrip) {
    const auto rows = load_fixture(testing_support::data_path("fixtures/reference.csv"));
    const auto fronts = fronts_by_video(rows);
    ASSERT_EQ(fronts.size(), 2u);
    EXPECT_EQ(fronts[0].video_id, "V001");
    EXPECT_EQ(fronts[0].front.source_size, 120u);

    const auto members_only = format_front_file(rows, fronts, false);
    const auto parsed = parse_front_file(members_only);
    ASSERT_EQ(parsed.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(parsed[i].front.members, fronts[i].front.members);
    EXPECT_EQ(format_front_file(rows, parsed, false), members_only);

    const auto all = format_front_file(rows, fronts, true);
    const auto parsed_all = parse_front_file(all);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(parsed_all[i].front.members, fronts[i].front.members);
        EXPECT_EQ(parsed_all[i].front.source_size, 120u);
    }
    // a front file loads as a measurement file
    EXPECT_EQ(parse_measurements(all), rows);
    EXPECT_THROW(parse_front_file("config_id,video_id,psnr_db,enc_time_s,bitrate_kbps,pareto\nS1,V1,1,1,1,2\n"),
                 ParseError);
}
