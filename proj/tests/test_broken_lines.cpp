#include <algorithm>

#include <gtest/gtest.h>

#include "qmirror/broken_lines.hpp"

using namespace qmirror;

namespace {

QCoeff s(int e) { return QCoeff::s_pow(e); }

const RatVec2 kQ{Rational(1, 3), Rational(-1)};

} // namespace

TEST(BrokenLines, EmptyDiagram)
{
    auto d = complete_to_consistency(build_initial_diagram({{1, 0}}, 0));
    const auto ls = enumerate_broken_lines(d, {2, 1}, kQ);
    ASSERT_EQ(ls.size(), 1u);
    EXPECT_EQ(ls[0].v(), (Vec2{2, 1}));
    EXPECT_EQ(ls[0].coeff(), QCoeff(1));
    EXPECT_EQ(theta_function(d, {2, 1}, kQ), QTElement::monomial(d.ring, {2, 1}));
    EXPECT_EQ(theta_function(d, {0, 0}, kQ), QTElement::one(d.ring));
}

TEST(BrokenLines, OneBendBelowTheLine)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}}, 1));
    const auto ls = enumerate_broken_lines(d, {0, 1}, kQ);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0].v(), (Vec2{-1, 1}));
    EXPECT_EQ(ls[0].coeff(), QCoeff(1));
    EXPECT_EQ(ls[0].mono(), BaseRing::var(0));
    ASSERT_EQ(ls[0].segments.size(), 2u);
    EXPECT_EQ(*ls[0].segments[1].start, RatVec2(Rational(-2, 3), Rational(0)));
    EXPECT_EQ(ls[1].v(), (Vec2{0, 1}));
    EXPECT_EQ(ls[1].segments.size(), 1u);
    EXPECT_EQ(theta_function(d, {0, 1}, kQ),
              QTElement::monomial(d.ring, {0, 1}) + QTElement::monomial(d.ring, {-1, 1}, 1, BaseRing::var(0)));
}

TEST(BrokenLines, UpperHalfPlaneNoBend)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}}, 1));
    const auto ls = enumerate_broken_lines(d, {0, 1}, RatVec2(Rational(1, 3), Rational(1)));
    ASSERT_EQ(ls.size(), 1u);
    EXPECT_EQ(ls[0].v(), (Vec2{0, 1}));
}

TEST(BrokenLines, RejectsEndpointOnWall)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}}, 1));
    EXPECT_THROW(enumerate_broken_lines(d, {0, 1}, RatVec2(Rational(1), Rational(0))), PerturbRequired);
}

TEST(BrokenLines, DegreeIncreasesAcrossBends)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {0, 1}}, 2));
    const RatVec2 Q = sample_endpoint(d, 5);
    for (Vec2 r : {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 1}, Vec2{2, -1}})
        for (const auto& bl : enumerate_broken_lines(d, r, Q)) {
            EXPECT_EQ(bl.segments.front().exponent, r);
            for (std::size_t i = 1; i < bl.segments.size(); ++i)
                EXPECT_GT(d.ring.degree(bl.segments[i].mono), d.ring.degree(bl.segments[i - 1].mono));
        }
}

TEST(Bracket, EmptyDiagramValues)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}}, 0));
    EXPECT_EQ(bracket_direct(d, {{1, 2}, {-1, -2}}, kQ), BaseSeries(d.ring, 0, 1));
    EXPECT_TRUE(bracket_direct(d, {{1, 2}, {-1, -1}}, kQ).is_zero());
    const std::vector<Vec2> th{{1, 0}, {0, 1}, {-1, -1}};
    EXPECT_EQ(bracket_via_product(d, th, kQ), BaseSeries(d.ring, 0, s(1)));
    EXPECT_EQ(bracket_direct(d, th, kQ), BaseSeries(d.ring, 0, s(1)));
    EXPECT_EQ(sym_bracket(d, th, kQ), BaseSeries(d.ring, 0, (s(1) + s(-1)) * QCoeff(mpq_class(1, 2))));
    EXPECT_TRUE(bracket_via_product(d, {{1, 0}}, kQ).is_zero());
}

TEST(Bracket, FirstOrderSingleMonomial)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {0, 1}}, 1));
    const RatVec2 Q = sample_endpoint(d, 1);
    const std::vector<Vec2> th{{1, 0}, {0, 1}};
    const auto direct = bracket_direct(d, th, Q);
    EXPECT_EQ(direct, bracket_via_product(d, th, Q));
    const QCoeff c = direct.coeff(BaseRing::var(0) | BaseRing::var(1));
    ASSERT_FALSE(c.is_zero());
    EXPECT_TRUE(c.is_laurent());
    EXPECT_EQ(c.num().c.size(), 1u);
    EXPECT_EQ(sym_bracket(d, th, Q), bracket_via_product(d, th, Q));
}

TEST(Bracket, DirectMatchesProductAcrossChambers)
{
    for (int N = 1; N <= 2; ++N) {
        const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {1, 2}}, N));
        const RatVec2 Q1 = sample_endpoint(d, 21), Q2 = sample_endpoint(d, 22);
        const std::vector<std::vector<Vec2>> grid{{{1, 0}, {0, 1}}, {{-1, 2}, {0, -1}}, {{1, 1}, {1, 0}, {-1, 0}}, {{2, 1}, {-1, 0}, {0, -2}}};
        for (const auto& th : grid) {
            const auto a = bracket_direct(d, th, Q1);
            EXPECT_EQ(a, bracket_via_product(d, th, Q1));
            EXPECT_EQ(a, bracket_via_product(d, th, Q2));
        }
    }
}

TEST(Bracket, SymmetrizedFullySymmetric)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {0, 1}}, 2));
    const RatVec2 Q = sample_endpoint(d, 3);
    std::vector<Vec2> th{{-1, 0}, {1, 1}, {0, -1}};
    const auto ref = sym_bracket(d, th, Q);
    EXPECT_EQ(ref, sym_bracket(d, th, Q, CyclicRep::FirstIndexLast));
    std::sort(th.begin(), th.end());
    do {
        EXPECT_EQ(sym_bracket(d, th, Q), ref);
    } while (std::next_permutation(th.begin(), th.end()));
}

TEST(Bracket, CollinearWallsBendTogether)
{
    // the added (1,1) ray lies on the line spanned by (-1,-1)
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {0, 1}, {-1, -1}}, 2));
    const RatVec2 Q1 = sample_endpoint(d, 4), Q2 = sample_endpoint(d, 8);
    const std::vector<std::vector<Vec2>> grid{{{1, 1}, {-1, 0}}, {{2, 2}, {-1, -1}}, {{1, 0}, {0, 1}, {1, 1}}, {{-1, 2}, {1, -1}, {0, -1}}};
    for (const auto& th : grid) {
        const auto a = bracket_direct(d, th, Q1);
        EXPECT_EQ(a, bracket_via_product(d, th, Q1));
        EXPECT_EQ(a, bracket_via_product(d, th, Q2));
    }
}

TEST(ThetaFunctions, TransportBetweenChambers)
{
    for (const std::vector<Vec2>& m : std::vector<std::vector<Vec2>>{{{1, 0}, {1, 2}}, {{1, 0}, {0, 1}, {-1, -1}}}) {
        const auto d = complete_to_consistency(build_initial_diagram(m, 2));
        const RatVec2 Q1 = sample_endpoint(d, 4), Q2 = sample_endpoint(d, 8);
        const RatVec2 M{Rational(1, 3), Rational(1, 7)};
        for (Vec2 r : {Vec2{1, 1}, Vec2{-1, 0}, Vec2{0, -1}, Vec2{-1, 2}, Vec2{2, -1}}) {
            const QTElement moved = dual_labeling(transport(d, transport(d, dual_labeling(theta_function(d, r, Q1)), Q1, M), M, Q2));
            EXPECT_EQ(moved, theta_function(d, r, Q2)) << to_string(r);
        }
    }
}
