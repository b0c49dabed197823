#include <random>

#include <gtest/gtest.h>

#include "qmirror/quantum_torus.hpp"

using namespace qmirror;

namespace {

QCoeff s(int e) { return QCoeff::s_pow(e); }

QTElement random_element(std::mt19937_64& rng, const BaseRing& r, int terms = 3)
{
    QTElement x(r);
    const auto monos = r.all_monomials();
    for (int i = 0; i < terms; ++i) {
        const Vec2 e{static_cast<std::int64_t>(rng() % 9) - 4, static_cast<std::int64_t>(rng() % 9) - 4};
        const QCoeff c = QCoeff::monomial(static_cast<long>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2)
            / (s(1) + static_cast<long>(rng() % 3));
        x.add_term(e, monos[rng() % monos.size()], c);
    }
    return x;
}

} // namespace

TEST(Wedge, Values)
{
    EXPECT_EQ(wedge(Vec2{1, 0}, Vec2{0, 1}), 1);
    EXPECT_EQ(wedge(Vec2{1, 0}, Vec2{2, 0}), 0);
    EXPECT_EQ(wedge(Vec2{0, 1}, Vec2{-1, -1}), 1);
}

TEST(QTMul, ProductRule)
{
    const BaseRing r = BaseRing::tseries(1, 1);
    const auto x = QTElement::monomial(r, {1, 0});
    const auto y = QTElement::monomial(r, {0, 1});
    EXPECT_EQ(x * y, QTElement::monomial(r, {1, 1}, s(1)));
    EXPECT_EQ(y * x, QTElement::monomial(r, {1, 1}, s(-1)));
}

TEST(QTMul, UnitAndAssociativity)
{
    std::mt19937_64 rng(3);
    const BaseRing r = BaseRing::tseries(2, 2);
    const auto one = QTElement::one(r);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_element(rng, r), b = random_element(rng, r), c = random_element(rng, r);
        EXPECT_EQ(one * a, a);
        EXPECT_EQ(a * one, a);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(QTMul, RingMismatch)
{
    const auto a = QTElement::one(BaseRing::tseries(1, 1));
    const auto b = QTElement::one(BaseRing::sqzero(1, 1));
    EXPECT_THROW(a * b, RingMismatch);
}

TEST(Conjugation, ParallelExponentsCommute)
{
    const BaseRing r = BaseRing::tseries(1, 2);
    const Hamiltonian H({1, 0}, QTElement::monomial(r, {1, 0}, 1, BaseRing::var(0))
                                    + QTElement::monomial(r, {2, 0}, 3, BaseRing::var(0, 2)));
    for (int l = -2; l <= 3; ++l) {
        const auto x = QTElement::monomial(r, {l, 0});
        EXPECT_EQ(qt_conjugate_by_exp(H, x, 1), x);
    }
}

TEST(Conjugation, OneStep)
{
    const BaseRing r = BaseRing::tseries(1, 1);
    const Hamiltonian H({1, 0}, QTElement::monomial(r, {1, 0}, QCoeff(1) / (s(1) - s(-1)), BaseRing::var(0)));
    const auto x = QTElement::monomial(r, {0, 1});
    const auto expected = x + QTElement::monomial(r, {1, 1}, 1, BaseRing::var(0));
    EXPECT_EQ(qt_conjugate_by_exp(H, x, 1), expected);
    const auto viaProduct = qt_exp(H.element()) * x * qt_exp(-H.element());
    EXPECT_EQ(viaProduct, expected);
    EXPECT_EQ(qt_conjugate_by_exp(H, expected, -1), x);
}

TEST(Conjugation, AgreesWithExponentialProduct)
{
    std::mt19937_64 rng(17);
    const BaseRing r = BaseRing::tseries(2, 2);
    for (int i = 0; i < 30; ++i) {
        const Vec2 d = primitive(Vec2{static_cast<std::int64_t>(rng() % 3) + 1, static_cast<std::int64_t>(rng() % 5) - 2});
        QTElement h(r);
        h.add_term(d, BaseRing::var(0), QCoeff(1) / (s(1) - s(-1)));
        h.add_term(d * 2, BaseRing::var(0) | BaseRing::var(1), s(2) + 1);
        const Hamiltonian H(d, h);
        const auto x = random_element(rng, r);
        EXPECT_EQ(qt_conjugate_by_exp(H, x, 1), qt_exp(h) * x * qt_exp(-h));
        EXPECT_EQ(qt_conjugate_by_exp(H, x, -1), qt_exp(-h) * x * qt_exp(h));
    }
}

TEST(Conjugation, Automorphism)
{
    std::mt19937_64 rng(23);
    const BaseRing r = BaseRing::tseries(2, 2);
    QTElement h(r);
    h.add_term({1, 1}, BaseRing::var(0), QCoeff(1) / (s(1) - s(-1)));
    h.add_term({2, 2}, BaseRing::var(1), QCoeff(-1) / (s(2) - s(-2)));
    const Hamiltonian H({1, 1}, h);
    for (int i = 0; i < 50; ++i) {
        const auto x = random_element(rng, r, 2), y = random_element(rng, r, 2);
        EXPECT_EQ(qt_conjugate_by_exp(H, x * y, 1), qt_conjugate_by_exp(H, x, 1) * qt_conjugate_by_exp(H, y, 1));
        EXPECT_EQ(qt_conjugate_by_exp(H, qt_conjugate_by_exp(H, x, 1), -1), x);
    }
}

TEST(Hamiltonian, RejectsDegreeZero)
{
    const BaseRing r = BaseRing::tseries(1, 1);
    EXPECT_THROW(Hamiltonian({1, 0}, QTElement::monomial(r, {1, 0})), NonNilpotent);
    EXPECT_THROW(Hamiltonian({1, 0}, QTElement::monomial(r, {-1, 0}, 1, BaseRing::var(0))), Error);
    EXPECT_THROW(qt_conjugate_by_exp(QTElement::monomial(r, {1, 0}), QTElement::one(r), 1), NonNilpotent);
}

TEST(ExpLog, Inverse)
{
    const BaseRing r = BaseRing::tseries(2, 2);
    QTElement h(r);
    h.add_term({1, 0}, BaseRing::var(0), QCoeff(1) / (s(1) - s(-1)));
    h.add_term({0, 1}, BaseRing::var(1), s(1));
    h.add_term({1, 1}, BaseRing::var(1) | BaseRing::var(0), 3);
    EXPECT_EQ(qt_log(qt_exp(h)), h);
    EXPECT_EQ(qt_exp(h) * qt_exp(-h), QTElement::one(r));
}

TEST(TextForm, SortedByExponent)
{
    const BaseRing r = BaseRing::tseries(1, 1);
    const auto x = QTElement::monomial(r, {1, 0}, 2) + QTElement::monomial(r, {0, 1}, s(-1), BaseRing::var(0));
    EXPECT_EQ(x.str(), "[s^-1]*t1*z^(0,1) + [2]*z^(1,0)");
}
