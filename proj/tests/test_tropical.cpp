#include <random>

#include <gtest/gtest.h>

#include "qmirror/scattering.hpp"
#include "qmirror/tropical.hpp"

using namespace qmirror;

namespace {

QCoeff s(int e) { return QCoeff::s_pow(e); }

TropicalDegree plane_degree(int d, std::uint64_t seed)
{
    TropicalDegree deg;
    for (int i = 0; i < d; ++i) {
        deg.ends.push_back({{1, 0}, false, {}, 0});
        deg.ends.push_back({{0, 1}, false, {}, 1});
        deg.ends.push_back({{-1, -1}, false, {}, 2});
    }
    RationalSampler rs(seed);
    for (int i = 0; i < 3 * d - 1; ++i) deg.points.push_back({rs.next_point(), 0});
    return deg;
}

} // namespace

TEST(Multiplicity, BlockGoettsche)
{
    EXPECT_EQ(bg_multiplicity({1, 0}, {0, 1}), QCoeff(1));
    EXPECT_EQ(bg_multiplicity({1, 0}, {0, 2}), s(1) + s(-1));
    EXPECT_THROW(bg_multiplicity({1, 0}, {2, 0}), Error);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const Vec2 a{static_cast<std::int64_t>(rng() % 9) - 4, static_cast<std::int64_t>(rng() % 9) - 4};
        const Vec2 b{static_cast<std::int64_t>(rng() % 9) - 4, static_cast<std::int64_t>(rng() % 9) - 4};
        const auto w = wedge(a, b);
        if (w == 0) continue;
        const QCoeff m = bg_multiplicity(a, b);
        EXPECT_EQ(m.classical_limit(), mpq_class(static_cast<long>(w < 0 ? -w : w)));
        EXPECT_EQ(m, m.bar());
    }
}

TEST(Multiplicity, Pointed)
{
    EXPECT_EQ(pointed_multiplicity({{2, 1}, {-2, -1}}), QCoeff(1));
    EXPECT_EQ(pointed_multiplicity({{1, 0}, {0, 1}, {-1, -1}}), (s(1) + s(-1)) * QCoeff(mpq_class(1, 2)));
    EXPECT_THROW(pointed_multiplicity({{1, 0}, {0, 1}}), Error);
}

TEST(Multiplicity, PointedRepresentativeIndependent)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const int m = 3 + static_cast<int>(rng() % 3);
        std::vector<Vec2> a;
        Vec2 sum;
        for (int j = 0; j + 1 < m; ++j) {
            a.push_back({static_cast<std::int64_t>(rng() % 7) - 3, static_cast<std::int64_t>(rng() % 7) - 3});
            sum += a.back();
        }
        a.push_back(-sum);
        // rotating the tuple permutes cyclic classes among themselves
        std::vector<Vec2> rot(a.begin() + 1, a.end());
        rot.push_back(a.front());
        EXPECT_EQ(pointed_multiplicity(a), pointed_multiplicity(rot));
        std::vector<Vec2> rev(a.rbegin(), a.rend());
        EXPECT_EQ(pointed_multiplicity(a), pointed_multiplicity(rev));
    }
}

TEST(Enumerate, PointedStar)
{
    TropicalDegree deg;
    deg.ends = {{{1, 0}}, {{0, 1}}, {{-1, -1}}};
    deg.points = {{RatVec2(Rational(1, 7), Rational(2, 5)), 1}};
    const auto cs = enumerate_rigid_curves(deg);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].vertices.size(), 1u);
    EXPECT_EQ(cs[0].vertices[0].pos, deg.points[0].pos);
    EXPECT_EQ(refined_count(deg), (s(1) + s(-1)) * QCoeff(mpq_class(1, 2)));
    EXPECT_EQ(refined_count(deg).classical_limit(), 1);
    EXPECT_EQ(classical_count(deg), 1);
}

TEST(Enumerate, StarWithFixedEnd)
{
    TropicalDegree deg;
    deg.ends = {{{1, 0}, true, RatVec2(Rational(0), Rational(1, 3))}, {{0, 1}}, {{-1, -1}}};
    deg.points = {{RatVec2(Rational(2), Rational(1, 3)), 1}};
    EXPECT_EQ(enumerate_rigid_curves(deg).size(), 1u);
    deg.points = {{RatVec2(Rational(2), Rational(1, 2)), 1}};
    EXPECT_EQ(enumerate_rigid_curves(deg).size(), 0u);
}

TEST(Enumerate, LinesThroughTwoPoints)
{
    const auto deg = plane_degree(1, 3);
    const auto cs = enumerate_rigid_curves(deg);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].multiplicity, QCoeff(1));
}

TEST(Enumerate, ConicsThroughFivePoints)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto deg = plane_degree(2, seed);
        const auto cs = enumerate_rigid_curves(deg);
        for (const auto& c : cs) {
            EXPECT_TRUE(c.balanced());
            EXPECT_TRUE(c.embedding_consistent());
        }
        EXPECT_EQ(refined_count(deg), QCoeff(1)) << "seed " << seed;
        EXPECT_EQ(classical_count(deg), 1);
    }
}

TEST(Enumerate, FixedEndsAndBivalentPoint)
{
    // two fixed lines, two free ends, one point on an edge
    TropicalDegree deg;
    deg.ends = {{{-1, 0}, true, RatVec2(Rational(0), Rational(3, 11))},
                {{0, -1}, true, RatVec2(Rational(-2, 13), Rational(0))},
                {{1, 0}},
                {{0, 1}}};
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        RationalSampler rs(seed);
        deg.points = {{rs.next_point(), 0}};
        const auto cs = enumerate_rigid_curves(deg);
        for (const auto& c : cs) EXPECT_TRUE(c.balanced());
        EXPECT_EQ(refined_count(deg), QCoeff(1)) << "seed " << seed;
    }
}
