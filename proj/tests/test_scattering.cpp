#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "qmirror/scattering.hpp"

using namespace qmirror;

namespace {

QCoeff s(int e) { return QCoeff::s_pow(e); }

std::string ray_listing(const ScatteringDiagram& d)
{
    std::ostringstream os;
    for (const Wall& w : d.walls) {
        if (w.is_initial()) continue;
        os << to_string(w.base) << ' ' << to_string(w.direction) << ' ' << w.hamiltonian.element().str() << '\n';
    }
    return os.str();
}

} // namespace

TEST(InitialDiagram, SingleVectorTwoTerms)
{
    const auto d = build_initial_diagram({{1, 0}}, 2);
    ASSERT_EQ(d.walls.size(), 1u);
    const QTElement expected = QTElement::monomial(d.ring, {1, 0}, QCoeff(1) / (s(1) - s(-1)), BaseRing::var(0))
        + QTElement::monomial(d.ring, {2, 0}, QCoeff(mpq_class(-1, 2)) / (s(2) - s(-2)), BaseRing::var(0, 2));
    EXPECT_EQ(d.walls[0].hamiltonian.element(), expected);
    EXPECT_EQ(d.walls[0].kind, WallKind::Line);
}

TEST(InitialDiagram, ZeroCap)
{
    auto d = build_initial_diagram({{1, 0}, {0, 1}}, 0);
    for (const auto& w : d.walls) EXPECT_TRUE(w.hamiltonian.is_zero());
    d = complete_to_consistency(d);
    EXPECT_TRUE(d.consistent);
    EXPECT_EQ(d.added_count(), 0u);
    EXPECT_THROW(build_initial_diagram({{0, 0}}, 1), ConfigError);
}

TEST(CrossWall, DownwardCrossing)
{
    const auto d = build_initial_diagram({{1, 0}}, 1);
    const auto x = QTElement::monomial(d.ring, {0, 1});
    const auto y = cross_wall(d.walls[0], x, {0, -1});
    const auto bend = QTElement::monomial(d.ring, {1, 1}, 1, BaseRing::var(0));
    // sign of the bend term is fixed by the orientation constant
    EXPECT_TRUE(y == x + bend || y == x - bend);
    EXPECT_EQ(cross_wall(d.walls[0], y, {0, 1}), x);
    const auto par = QTElement::monomial(d.ring, {1, 0});
    EXPECT_EQ(cross_wall(d.walls[0], par, {0, 1}), par);
    EXPECT_THROW(cross_wall(d.walls[0], x, {1, 0}), PerturbRequired);
}

TEST(LoopProduct, InitialDiscrepancy)
{
    const auto d = build_initial_diagram({{1, 0}, {0, 1}}, 1);
    const auto x = QTElement::monomial(d.ring, {0, 1});
    const auto y = loop_product(d, RatVec2{}, 1, x);
    const auto diff = y - x;
    ASSERT_FALSE(diff.is_zero());
    for (const auto& [k, c] : diff.terms()) EXPECT_EQ(k.mono, BaseRing::var(0) | BaseRing::var(1));
    const ScatteringDiagram empty{d.ring, {}, {}, true, 1};
    EXPECT_EQ(loop_product(empty, RatVec2{}, 1, x), x);
}

TEST(Completion, SingleLineAddsNothing)
{
    for (int N = 1; N <= 3; ++N) {
        const auto d = complete_to_consistency(build_initial_diagram({{1, 0}}, N));
        EXPECT_EQ(d.added_count(), 0u);
        EXPECT_TRUE(d.consistent);
    }
}

TEST(Completion, FirstOrderMatchesCommutator)
{
    const auto d0 = build_initial_diagram({{1, 0}, {0, 1}}, 1);
    const auto d = complete_to_consistency(d0);
    ASSERT_EQ(d.added_count(), 1u);
    const Wall& ray = d.walls.back();
    EXPECT_EQ(ray.direction, (Vec2{1, 1}));
    EXPECT_EQ(ray.base, RatVec2{});
    const auto bch = commutator(d0.walls[0].hamiltonian.element(), d0.walls[1].hamiltonian.element());
    EXPECT_EQ(bch, QTElement::monomial(d.ring, {1, 1}, QCoeff(1) / (s(1) - s(-1)), BaseRing::var(0) | BaseRing::var(1)));
    EXPECT_EQ(ray.hamiltonian.element(), bch.scaled(QCoeff(-kOrientation)));
    // positive t1 t2 coefficient
    EXPECT_EQ(ray.hamiltonian.element(), bch);
    const auto x = QTElement::monomial(d.ring, {0, 1});
    EXPECT_EQ(loop_product(d, RatVec2{}, safe_radius(d, RatVec2{}), x), x);
}

TEST(Completion, SecondOrderGolden)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {0, 1}}, 2));
    EXPECT_TRUE(d.consistent);
    EXPECT_EQ(d.certified_order, 4);
    std::vector<Vec2> dirs;
    for (const auto& w : d.walls)
        if (!w.is_initial()) dirs.push_back(w.direction);
    // pentagon identity: only the diagonal ray appears for this m
    EXPECT_EQ(dirs, (std::vector<Vec2>{{1, 1}}));
    std::ifstream in(QMIRROR_TEST_DATA "/rays_m10_01_N2.txt");
    ASSERT_TRUE(in) << "missing golden file";
    std::stringstream golden;
    golden << in.rdbuf();
    EXPECT_EQ(ray_listing(d), golden.str());
    // re-running adds nothing
    EXPECT_EQ(complete_to_consistency(d).walls.size(), d.walls.size());
}

TEST(Completion, ThirdOrderWithinBudget)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {0, 1}}, 3));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(d.consistent);
    const auto r = safe_radius(d, RatVec2{});
    for (Vec2 e : {Vec2{1, 0}, Vec2{0, 1}}) {
        const auto x = QTElement::monomial(d.ring, e);
        EXPECT_EQ(loop_product(d, RatVec2{}, r, x), x);
    }
    EXPECT_LT(secs, 120.0);
}

TEST(Completion, HamiltoniansDirectionHomogeneous)
{
    const auto d = complete_to_consistency(build_initial_diagram({{1, 0}, {1, 2}}, 2));
    for (const auto& w : d.walls)
        for (const auto& [k, c] : w.hamiltonian.element().terms()) {
            EXPECT_EQ(wedge(k.exp, w.direction), 0);
            EXPECT_GT(k.exp.x * w.direction.x + k.exp.y * w.direction.y, 0);
        }
}

TEST(Factored, WallCountsAndCoefficients)
{
    const auto offs = sample_offsets(1, 2, 7);
    const auto d = build_factored_diagram({{1, 0}}, 2, offs);
    ASSERT_EQ(d.walls.size(), 3u);
    const Wall& w12 = d.walls[2];
    EXPECT_EQ(w12.provenance.l, 2);
    const QCoeff c = QCoeff(mpq_class(-1, 2)) / (s(2) - s(-2)) * QCoeff(2);
    EXPECT_EQ(w12.hamiltonian.element(), QTElement::monomial(d.ring, {2, 0}, c, BaseRing::var(0) | BaseRing::var(1)));
    EXPECT_EQ(factored_indices(2, 3).size(), 14u);
}

TEST(Factored, SplittingIdentity)
{
    const BaseRing t = BaseRing::tseries(1, 2), u = BaseRing::sqzero(1, 2);
    const auto x = QTElement::monomial(t, {0, 0}, 1, BaseRing::var(0, 2));
    EXPECT_EQ(embed_split(x, u), QTElement::monomial(u, {0, 0}, 2, BaseRing::var(0) | BaseRing::var(1)));
}

TEST(Factored, RejectsConcurrentOffsets)
{
    std::map<FactoredIndex, RatVec2> offs;
    for (const auto& idx : factored_indices(2, 1)) offs[idx] = RatVec2{};
    offs[{1, 1, 1}] = RatVec2{};
    const auto d = build_factored_diagram({{1, 0}, {0, 1}}, 1, offs);
    EXPECT_EQ(d.walls.size(), 2u);
    std::map<FactoredIndex, RatVec2> bad;
    for (const auto& idx : factored_indices(2, 2)) bad[idx] = RatVec2{};
    EXPECT_THROW(build_factored_diagram({{1, 0}, {0, 1}}, 2, bad), PerturbRequired);
}

TEST(Factored, FirstOrderSameAsUnfactored)
{
    const auto d = complete_to_consistency(build_factored_diagram({{1, 0}, {0, 1}}, 1, sample_offsets(2, 1, 3)));
    ASSERT_EQ(d.added_count(), 1u);
    EXPECT_EQ(d.walls.back().direction, (Vec2{1, 1}));
}

TEST(Factored, TotalsMatchUnfactoredPerDirection)
{
    const std::vector<Vec2> m{{1, 0}, {0, 1}};
    const auto ud = complete_to_consistency(build_initial_diagram(m, 2));
    const auto fd = complete_to_consistency(build_factored_diagram(m, 2, sample_offsets(2, 2, 11)));
    EXPECT_TRUE(fd.consistent);
    std::map<Vec2, QTElement> lhs, rhs;
    for (const auto& w : ud.walls) {
        auto [it, f] = lhs.try_emplace(w.direction, QTElement(fd.ring));
        it->second += embed_split(w.hamiltonian.element(), fd.ring);
    }
    for (const auto& w : fd.walls) {
        auto [it, f] = rhs.try_emplace(w.direction, QTElement(fd.ring));
        it->second += w.hamiltonian.element();
    }
    for (const auto& [dir, h] : rhs) EXPECT_EQ(h, lhs.count(dir) ? lhs[dir] : QTElement(fd.ring)) << to_string(dir);
    for (const auto& [dir, h] : lhs) EXPECT_EQ(h, rhs[dir]) << to_string(dir);
    // rays in directions (2,1) and (1,2) exist but cancel in total
    std::set<Vec2> dirs;
    for (const auto& w : fd.walls) dirs.insert(w.direction);
    EXPECT_TRUE((dirs.count({2, 1}) && dirs.count({1, 2})));
    EXPECT_TRUE((rhs[Vec2{2, 1}].is_zero()));
}
