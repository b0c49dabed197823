#pragma once

#include <map>
#include <string>
#include <tuple>

#include "qmirror/base_ring.hpp"

namespace qmirror {

struct QTKey {
    Vec2 exp;
    Mono mono = 0;
    auto operator<=>(const QTKey&) const = default;
};

/// Element of the quantum torus C_q[M] tensored with a truncated base ring.
class QTElement {
public:
    QTElement() = default;
    explicit QTElement(BaseRing r) : ring_(r) {}

    /// c * mono * z^e.
    static QTElement monomial(BaseRing r, Vec2 e, QCoeff c = 1, Mono mono = 0)
    {
        QTElement x(r);
        x.add_term(e, mono, c);
        return x;
    }
    static QTElement one(BaseRing r) { return monomial(r, {0, 0}); }

    const BaseRing& ring() const { return ring_; }
    const std::map<QTKey, QCoeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Vec2 e, Mono mono, const QCoeff& c)
    {
        if (c.is_zero()) return;
        if (ring_.total_cap >= 0 && ring_.degree(mono) > ring_.total_cap) return;
        auto [it, fresh] = terms_.try_emplace(QTKey{e, mono}, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// Base-ring coefficient of z^e.
    BaseSeries coefficient(Vec2 e) const
    {
        BaseSeries r(ring_);
        for (auto it = terms_.lower_bound(QTKey{e, 0}); it != terms_.end() && it->first.exp == e; ++it)
            r.add_term(it->first.mono, it->second);
        return r;
    }

    /// Lowest base degree among stored terms, or -1 when zero.
    int min_degree() const
    {
        int d = -1;
        for (const auto& [k, c] : terms_) {
            const int e = ring_.degree(k.mono);
            if (d < 0 || e < d) d = e;
        }
        return d;
    }

    /// Terms of base degree exactly k.
    QTElement degree_part(int k) const
    {
        QTElement r(ring_);
        for (const auto& [key, c] : terms_)
            if (ring_.degree(key.mono) == k) r.terms_.emplace(key, c);
        return r;
    }

    /// Copy into another (compatible) ring, dropping terms beyond its caps.
    QTElement in_ring(BaseRing r) const
    {
        if (!r.same_ring(ring_)) throw RingMismatch();
        QTElement x(r);
        for (const auto& [k, c] : terms_) x.add_term(k.exp, k.mono, c);
        return x;
    }

    bool operator==(const QTElement& o) const { return terms_ == o.terms_; }

    friend QTElement operator+(QTElement a, const QTElement& b)
    {
        if (!a.ring_.same_ring(b.ring_)) throw RingMismatch();
        for (const auto& [k, c] : b.terms_) a.add_term(k.exp, k.mono, c);
        return a;
    }
    QTElement operator-() const
    {
        QTElement r(ring_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    friend QTElement operator-(const QTElement& a, const QTElement& b) { return a + (-b); }

    QTElement scaled(const QCoeff& k) const
    {
        QTElement r(ring_);
        for (const auto& [key, c] : terms_) r.add_term(key.exp, key.mono, c * k);
        return r;
    }

    /// Product with z^a z^b = s^{a^b} z^{a+b}.
    friend QTElement operator*(const QTElement& a, const QTElement& b)
    {
        if (!a.ring_.same_ring(b.ring_)) throw RingMismatch();
        BaseRing r = a.ring_;
        if (b.ring_.total_cap >= 0 && (r.total_cap < 0 || b.ring_.total_cap < r.total_cap)) r.total_cap = b.ring_.total_cap;
        QTElement out(r);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                auto m = r.mul(ka.mono, kb.mono);
                if (!m) continue;
                out.add_term(ka.exp + kb.exp, *m, ca * cb * QCoeff::s_pow(static_cast<int>(wedge(ka.exp, kb.exp))));
            }
        return out;
    }

    QTElement& operator+=(const QTElement& o) { return *this = *this + o; }
    QTElement& operator*=(const QTElement& o) { return *this = *this * o; }

    /// Terms sorted by exponent, then base monomial.
    std::string str() const
    {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [k, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "[" + c.str() + "]";
            if (k.mono != 0) out += "*" + ring_.mono_str(k.mono);
            out += "*z^" + to_string(k.exp);
        }
        return out;
    }

private:
    BaseRing ring_;
    std::map<QTKey, QCoeff> terms_;
};

inline QTElement qt_mul(const QTElement& a, const QTElement& b) { return a * b; }

/// [a, b] via [c z^p, d z^k] = c d (s^{p^k} - s^{-p^k}) z^{p+k}.
inline QTElement commutator(const QTElement& a, const QTElement& b)
{
    if (!a.ring().same_ring(b.ring())) throw RingMismatch();
    BaseRing r = a.ring();
    if (b.ring().total_cap >= 0 && (r.total_cap < 0 || b.ring().total_cap < r.total_cap)) r.total_cap = b.ring().total_cap;
    QTElement out(r);
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            const auto w = static_cast<int>(wedge(ka.exp, kb.exp));
            if (w == 0) continue;
            auto m = r.mul(ka.mono, kb.mono);
            if (!m) continue;
            out.add_term(ka.exp + kb.exp, *m, ca * cb * s_diff(w));
        }
    return out;
}

/// Wall-crossing Hamiltonian: supported on positive multiples of a primitive
/// direction, with every scalar of base degree at least 1.
class Hamiltonian {
public:
    Hamiltonian() = default;
    Hamiltonian(Vec2 direction, QTElement h) : dir_(direction), h_(std::move(h))
    {
        if (primitive(dir_) != dir_ || dir_.is_zero()) throw Error("Hamiltonian direction must be primitive");
        for (const auto& [k, c] : h_.terms()) {
            if (h_.ring().degree(k.mono) == 0) throw NonNilpotent();
            if (wedge(k.exp, dir_) != 0 || k.exp.x * dir_.x + k.exp.y * dir_.y <= 0)
                throw Error("Hamiltonian exponent " + to_string(k.exp) + " not a positive multiple of " + to_string(dir_));
        }
    }

    Vec2 direction() const { return dir_; }
    const QTElement& element() const { return h_; }
    bool is_zero() const { return h_.is_zero(); }
    int min_degree() const { return h_.min_degree(); }

private:
    Vec2 dir_{1, 0};
    QTElement h_;
};

/// exp(sigma*H) x exp(-sigma*H) = sum_n ad_{sigma H}^n(x) / n!.
inline QTElement qt_conjugate_by_exp(const QTElement& H, const QTElement& x, int sign)
{
    for (const auto& [k, c] : H.terms())
        if (H.ring().degree(k.mono) == 0) throw NonNilpotent();
    const QTElement sH = sign > 0 ? H : -H;
    QTElement result = x;
    QTElement term = x;
    for (long n = 1; ; ++n) {
        term = commutator(sH, term).scaled(QCoeff(mpq_class(1, n)));
        if (term.is_zero()) break;
        result += term;
    }
    return result;
}

inline QTElement qt_conjugate_by_exp(const Hamiltonian& H, const QTElement& x, int sign)
{
    return qt_conjugate_by_exp(H.element(), x, sign);
}

/// exp(X) for X with all scalars of base degree >= 1.
inline QTElement qt_exp(const QTElement& X)
{
    QTElement result = QTElement::one(X.ring());
    QTElement term = result;
    for (long n = 1; ; ++n) {
        term = (term * X).scaled(QCoeff(mpq_class(1, n)));
        if (term.is_zero()) break;
        result += term;
    }
    return result;
}

/// log(G) for G = 1 + e with e nilpotent.
inline QTElement qt_log(const QTElement& G)
{
    const QTElement eps = G - QTElement::one(G.ring());
    for (const auto& [k, c] : eps.terms())
        if (G.ring().degree(k.mono) == 0) throw NonNilpotent();
    QTElement result(G.ring());
    QTElement power = eps;
    for (long n = 1; !power.is_zero(); ++n) {
        result += power.scaled(QCoeff(mpq_class(n % 2 ? 1 : -1, n)));
        power = power * eps;
    }
    return result;
}

} // namespace qmirror
