#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qmirror/error.hpp"

namespace qmirror {

/// Dense polynomial in one variable over Q, coefficients stored low to high.
/// The zero polynomial is the empty vector; the top coefficient is never zero.
struct Poly {
    std::vector<mpq_class> c;

    Poly() = default;
    explicit Poly(std::vector<mpq_class> v) : c(std::move(v)) { trim(); }
    static Poly constant(const mpq_class& a) { return Poly(std::vector<mpq_class>{a}); }
    static Poly monomial(const mpq_class& a, int e)
    {
        std::vector<mpq_class> v(static_cast<std::size_t>(e) + 1);
        v.back() = a;
        return Poly(std::move(v));
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const mpq_class& lead() const { return c.back(); }
    bool operator==(const Poly& o) const { return c == o.c; }

    void trim()
    {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    /// Number of leading zero coefficients (power of s dividing the polynomial).
    int low_order() const
    {
        int k = 0;
        while (k < static_cast<int>(c.size()) && c[k] == 0) ++k;
        return k;
    }

    Poly shifted_down(int k) const
    {
        return Poly(std::vector<mpq_class>(c.begin() + k, c.end()));
    }

    mpq_class eval(const mpq_class& s) const
    {
        mpq_class r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * s + *it;
        return r;
    }

    bool is_one() const { return c.size() == 1 && c[0] == 1; }
};

inline Poly operator+(const Poly& a, const Poly& b)
{
    std::vector<mpq_class> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
}

inline Poly operator-(const Poly& a)
{
    Poly r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> r(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return Poly(std::move(r));
}

inline Poly operator*(const mpq_class& k, const Poly& a)
{
    if (k == 0) return {};
    Poly r = a;
    for (auto& x : r.c) x *= k;
    return r;
}

/// Euclidean division a = q*b + r.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b)
{
    if (b.is_zero()) throw DivisionByZero();
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<mpq_class> q(a.c.size() - b.c.size() + 1);
    std::vector<mpq_class> r = a.c;
    const mpq_class inv = 1 / b.lead();
    for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
        const mpq_class f = r[i + b.degree()] * inv;
        q[i] = f;
        if (f == 0) continue;
        for (int j = 0; j <= b.degree(); ++j) r[i + j] -= f * b.c[j];
    }
    return {Poly(std::move(q)), Poly(std::move(r))};
}

/// Monic gcd.
inline Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return (1 / mpq_class(a.lead())) * a;
}

/// Multiplicity of s = 1 as a root.
inline int root_multiplicity_at_one(Poly p)
{
    if (p.is_zero()) return 0;
    const Poly lin(std::vector<mpq_class>{-1, 1});
    int k = 0;
    for (;;) {
        auto [q, r] = divmod(p, lin);
        if (!r.is_zero()) return k;
        p = std::move(q);
        ++k;
    }
}

} // namespace qmirror
