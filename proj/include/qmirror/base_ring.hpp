#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmirror/lattice.hpp"
#include "qmirror/qcoeff.hpp"

namespace qmirror {

/// Packed monomial: 4 bits of exponent per variable.
using Mono = std::uint64_t;

/// Truncated commutative base ring: either R_N = Q(s)[t_1..t_n]/(t_j^{N+1})
/// or the square-zero ring in u_{ja}, 1 <= a <= N.
struct BaseRing {
    enum class Kind { TSeries, SqZero };

    Kind kind = Kind::TSeries;
    int n = 0; // number of groups j
    int N = 0; // cap (TSeries) or parts per group (SqZero)
    int total_cap = -1; // optional total-degree truncation, -1 = none

    static BaseRing tseries(int n, int N) { return {Kind::TSeries, n, N, -1}; }
    static BaseRing sqzero(int n, int N) { return {Kind::SqZero, n, N, -1}; }

    BaseRing with_total_cap(int k) const
    {
        BaseRing r = *this;
        r.total_cap = k;
        return r;
    }

    int vars() const { return kind == Kind::TSeries ? n : n * N; }
    int var_cap() const { return kind == Kind::TSeries ? N : 1; }
    int var_index(int j, int a) const { return kind == Kind::TSeries ? j : j * N + a; }
    int group_of(int v) const { return kind == Kind::TSeries ? v : v / N; }
    int max_degree() const { return vars() * var_cap(); }

    bool same_ring(const BaseRing& o) const { return kind == o.kind && n == o.n && N == o.N; }
    bool operator==(const BaseRing& o) const { return same_ring(o) && total_cap == o.total_cap; }

    void validate() const
    {
        if (n < 0 || N < 0) throw ConfigError("negative ring size");
        if (vars() > 16 || var_cap() > 15) throw ConfigError("base ring too large for packed monomials");
    }

    static int exponent(Mono m, int v) { return static_cast<int>((m >> (4 * v)) & 0xF); }
    static Mono var(int v, int e = 1) { return static_cast<Mono>(e) << (4 * v); }

    int degree(Mono m) const
    {
        int d = 0;
        for (int v = 0; v < vars(); ++v) d += exponent(m, v);
        return d;
    }

    int group_degree(Mono m, int j) const
    {
        if (kind == Kind::TSeries) return exponent(m, j);
        int d = 0;
        for (int a = 0; a < N; ++a) d += exponent(m, j * N + a);
        return d;
    }

    /// Product of monomials, or nothing when a cap is exceeded.
    std::optional<Mono> mul(Mono a, Mono b) const
    {
        const Mono s = a + b; // no nibble overflow since caps <= 15 and inputs within caps
        const int cap = var_cap();
        int d = 0;
        for (int v = 0; v < vars(); ++v) {
            const int e = exponent(s, v);
            if (e > cap) return std::nullopt;
            d += e;
        }
        if (total_cap >= 0 && d > total_cap) return std::nullopt;
        return s;
    }

    /// Whether b divides a; returns a / b.
    std::optional<Mono> div(Mono a, Mono b) const
    {
        for (int v = 0; v < vars(); ++v)
            if (exponent(b, v) > exponent(a, v)) return std::nullopt;
        return a - b;
    }

    /// All monomials within caps, in increasing packed order.
    std::vector<Mono> all_monomials() const
    {
        std::vector<Mono> out{0};
        for (int v = 0; v < vars(); ++v) {
            std::vector<Mono> next;
            for (Mono m : out)
                for (int e = 0; e <= var_cap(); ++e) next.push_back(m | var(v, e));
            out = std::move(next);
        }
        std::vector<Mono> kept;
        for (Mono m : out)
            if (total_cap < 0 || degree(m) <= total_cap) kept.push_back(m);
        std::sort(kept.begin(), kept.end());
        return kept;
    }

    /// Exponent of the monomial under t_j (or u_{ja}) -> z^{m_j}.
    Vec2 phi(Mono m, const std::vector<Vec2>& ms) const
    {
        Vec2 r;
        for (int j = 0; j < n; ++j) r += ms[j] * group_degree(m, j);
        return r;
    }

    std::string mono_str(Mono m) const
    {
        if (m == 0) return "1";
        std::string out;
        for (int v = 0; v < vars(); ++v) {
            const int e = exponent(m, v);
            if (e == 0) continue;
            if (!out.empty()) out += '*';
            if (kind == Kind::TSeries) {
                out += "t" + std::to_string(v + 1);
            } else {
                out += "u" + std::to_string(v / N + 1) + "_" + std::to_string(v % N + 1);
            }
            if (e > 1) out += "^" + std::to_string(e);
        }
        return out;
    }
};

/// Element of a BaseRing: monomial -> QCoeff, no zero coefficients stored.
class BaseSeries {
public:
    BaseSeries() = default;
    explicit BaseSeries(BaseRing r) : ring_(r) {}
    BaseSeries(BaseRing r, Mono m, QCoeff c) : ring_(r) { add_term(m, std::move(c)); }

    const BaseRing& ring() const { return ring_; }
    const std::map<Mono, QCoeff>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    QCoeff coeff(Mono m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? QCoeff() : it->second;
    }

    void add_term(Mono m, const QCoeff& c)
    {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool operator==(const BaseSeries& o) const { return terms_ == o.terms_; }

    friend BaseSeries operator+(BaseSeries a, const BaseSeries& b)
    {
        for (const auto& [m, c] : b.terms_) a.add_term(m, c);
        return a;
    }
    BaseSeries operator-() const
    {
        BaseSeries r(ring_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend BaseSeries operator-(const BaseSeries& a, const BaseSeries& b) { return a + (-b); }

    friend BaseSeries operator*(const BaseSeries& a, const BaseSeries& b)
    {
        if (!a.ring_.same_ring(b.ring_)) throw RingMismatch();
        BaseSeries r(a.ring_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                if (auto m = a.ring_.mul(ma, mb)) r.add_term(*m, ca * cb);
        return r;
    }

    BaseSeries scaled(const QCoeff& k) const
    {
        BaseSeries r(ring_);
        for (const auto& [m, c] : terms_) r.add_term(m, c * k);
        return r;
    }

    std::string str() const
    {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "[" + c.str() + "]";
            if (m != 0) out += "*" + ring_.mono_str(m);
        }
        return out;
    }

private:
    BaseRing ring_;
    std::map<Mono, QCoeff> terms_;
};

} // namespace qmirror
