#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qmirror/quantum_torus.hpp"

namespace qmirror {

/// Global orientation constant for wall crossings.
inline constexpr int kOrientation = -1;

enum class WallKind { Line, Ray };

struct Provenance {
    enum class Kind { Initial, Added, Factored };
    Kind kind = Kind::Initial;
    int order = 0;      // base degree at which an added ray appeared
    int j = -1;         // factored index (j, l, A)
    int l = 0;
    unsigned A = 0;     // bitmask over 1..N

    std::string str() const
    {
        switch (kind) {
        case Kind::Initial: return "initial";
        case Kind::Added: return "added@" + std::to_string(order);
        case Kind::Factored: {
            std::string a;
            for (int i = 0; i < 16; ++i)
                if (A >> i & 1u) a += (a.empty() ? "" : ",") + std::to_string(i + 1);
            return "factored(" + std::to_string(j + 1) + "," + std::to_string(l) + ",{" + a + "})";
        }
        }
        return {};
    }
};

struct Wall {
    RatVec2 base;
    Vec2 direction;
    WallKind kind = WallKind::Line;
    Hamiltonian hamiltonian;
    Provenance provenance;

    bool is_initial() const { return provenance.kind != Provenance::Kind::Added; }

    /// Parameter t with p = base + t*direction, if p lies on the line.
    std::optional<Rational> param_of(const RatVec2& p) const
    {
        const RatVec2 d = p - base;
        if (wedge(d, direction) != 0) return std::nullopt;
        return dot(d, direction) / Rational(static_cast<long>(direction.x * direction.x + direction.y * direction.y));
    }

    bool contains(const RatVec2& p) const
    {
        auto t = param_of(p);
        return t && (kind == WallKind::Line || *t >= 0);
    }
};

struct ScatteringDiagram {
    BaseRing ring;
    std::vector<Vec2> m;
    std::vector<Wall> walls;
    bool consistent = false;
    int certified_order = -1;

    std::size_t added_count() const
    {
        return static_cast<std::size_t>(std::count_if(walls.begin(), walls.end(), [](const Wall& w) { return !w.is_initial(); }));
    }
};

/// (1/l) (-1)^{l-1} / (s^l - s^-l).
inline QCoeff initial_coefficient(int l)
{
    return QCoeff(mpq_class((l % 2) ? 1 : -1, l)) / s_diff(l);
}

inline ScatteringDiagram build_initial_diagram(const std::vector<Vec2>& m, int N)
{
    ScatteringDiagram d;
    d.ring = BaseRing::tseries(static_cast<int>(m.size()), N);
    d.ring.validate();
    d.m = m;
    for (int j = 0; j < static_cast<int>(m.size()); ++j) {
        if (m[j].is_zero()) throw ConfigError("zero vector in m");
        QTElement h(d.ring);
        for (int l = 1; l <= N; ++l) h.add_term(m[j] * l, BaseRing::var(j, l), initial_coefficient(l));
        d.walls.push_back({RatVec2{}, primitive(m[j]), WallKind::Line, Hamiltonian(primitive(m[j]), h), {}});
    }
    return d;
}

/// Conjugation by exp(sigma H), sigma = kOrientation * sign(travel ^ direction).
inline int crossing_sign(const Wall& w, Vec2 travel)
{
    const int sg = sign(wedge(travel, w.direction));
    if (sg == 0) throw PerturbRequired("travel direction parallel to wall " + to_string(w.direction));
    return kOrientation * sg;
}

inline QTElement cross_wall(const Wall& w, const QTElement& x, Vec2 travel)
{
    return qt_conjugate_by_exp(w.hamiltonian, x, crossing_sign(w, travel));
}

namespace detail {

struct LocalCrossing {
    Vec2 out;      // outgoing half-direction from the center
    std::size_t wall;
    int sign;
};

/// Walls through p, crossed counterclockwise on an infinitesimal loop, first crossed first.
inline std::vector<LocalCrossing> local_crossings(const ScatteringDiagram& d, const RatVec2& p)
{
    std::vector<LocalCrossing> out;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        const Wall& w = d.walls[i];
        auto t = w.param_of(p);
        if (!t) continue;
        if (w.kind == WallKind::Ray && *t < 0) continue;
        std::vector<Vec2> dirs{w.direction};
        if (w.kind == WallKind::Line || *t > 0) dirs.push_back(-w.direction);
        for (Vec2 e : dirs) out.push_back({e, i, crossing_sign(w, Vec2{-e.y, e.x})});
    }
    std::stable_sort(out.begin(), out.end(), [](const LocalCrossing& a, const LocalCrossing& b) { return angle_less(a.out, b.out); });
    return out;
}

} // namespace detail

/// Action of the infinitesimal counterclockwise loop around p.
inline QTElement local_loop(const ScatteringDiagram& d, const RatVec2& p, const QTElement& x)
{
    QTElement y = x;
    for (const auto& c : detail::local_crossings(d, p)) y = qt_conjugate_by_exp(d.walls[c.wall].hamiltonian, y, c.sign);
    return y;
}

/// log of the loop group element around p, truncated at total base degree k.
inline QTElement local_log(const ScatteringDiagram& d, const RatVec2& p, int k)
{
    const BaseRing r = d.ring.with_total_cap(k);
    QTElement g = QTElement::one(r);
    for (const auto& c : detail::local_crossings(d, p)) {
        const QTElement h = d.walls[c.wall].hamiltonian.element().in_ring(r);
        g = qt_exp(c.sign > 0 ? h : -h) * g;
    }
    return qt_log(g);
}

inline std::optional<RatVec2> support_intersection(const Wall& a, const Wall& b)
{
    const auto den = wedge(a.direction, b.direction);
    if (den == 0) return std::nullopt;
    // a.base + t a.dir = b.base + u b.dir
    const Rational t = wedge(b.base - a.base, b.direction) / Rational(static_cast<long>(den));
    const RatVec2 p = a.base + RatVec2(a.direction) * t;
    if (!a.contains(p) || !b.contains(p)) return std::nullopt;
    return p;
}

/// Pairwise support intersections and ray bases, ordered by distance from the origin.
inline std::vector<RatVec2> singular_points(const ScatteringDiagram& d)
{
    std::vector<RatVec2> pts;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        if (d.walls[i].kind == WallKind::Ray) pts.push_back(d.walls[i].base);
        for (std::size_t j = i + 1; j < d.walls.size(); ++j)
            if (auto p = support_intersection(d.walls[i], d.walls[j])) pts.push_back(*p);
    }
    std::sort(pts.begin(), pts.end(), [](const RatVec2& a, const RatVec2& b) {
        const Rational na = norm2(a), nb = norm2(b);
        return na != nb ? na < nb : a < b;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// Height-to-width ratio of the probe loop; keeps diagonal walls off its corners.
inline const Rational kLoopAspect{1000, 1009};

/// Half-width of a loop rectangle around p crossed only by walls through p.
inline Rational safe_radius(const ScatteringDiagram& d, const RatVec2& p)
{
    Rational r = 1;
    for (const Wall& w : d.walls) {
        if (w.contains(p)) continue;
        const RatVec2 v = p - w.base;
        const Rational len2 = static_cast<long>(w.direction.x * w.direction.x + w.direction.y * w.direction.y);
        const Rational t = dot(v, w.direction);
        Rational dist2;
        if (w.kind == WallKind::Ray && t < 0) {
            dist2 = norm2(v);
        } else {
            const Rational c = wedge(v, w.direction);
            dist2 = c * c / len2;
        }
        while (2 * r * r >= dist2) r /= 2;
    }
    return r;
}

/// Path-ordered product along the rectangle of half-width radius and
/// half-height radius*kLoopAspect around center, counterclockwise from the
/// bottom-right corner.
inline QTElement loop_product(const ScatteringDiagram& d, const RatVec2& center, const Rational& radius, const QTElement& x)
{
    const Rational h = radius * kLoopAspect;
    const RatVec2 c[4] = {center + RatVec2(radius, -h), center + RatVec2(radius, h),
                          center + RatVec2(-radius, h), center + RatVec2(-radius, -h)};
    const Vec2 travel[4] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};
    struct Hit {
        Rational pos;
        std::size_t wall;
        Vec2 travel;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        const Wall& w = d.walls[i];
        for (int e = 0; e < 4; ++e) {
            const RatVec2 A = c[e], E = c[(e + 1) % 4] - c[e];
            const Rational den = wedge(E, w.direction);
            if (den == 0) {
                if (wedge(A - w.base, w.direction) == 0) throw PerturbRequired("wall along the loop");
                continue;
            }
            const Rational lambda = wedge(w.base - A, w.direction) / den;
            if (lambda < 0 || lambda > 1) continue;
            const RatVec2 X = A + E * lambda;
            const Rational t = dot(X - w.base, w.direction);
            if (w.kind == WallKind::Ray && t < 0) continue;
            if (w.kind == WallKind::Ray && t == 0) throw PerturbRequired("wall endpoint on the loop");
            if (lambda == 0 || lambda == 1) throw PerturbRequired("wall through a loop corner");
            hits.push_back({Rational(e) + lambda, i, travel[e]});
        }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
    for (std::size_t i = 1; i < hits.size(); ++i)
        if (hits[i].pos == hits[i - 1].pos && wedge(d.walls[hits[i].wall].direction, d.walls[hits[i - 1].wall].direction) != 0)
            throw PerturbRequired("two crossings at the same loop position");
    QTElement y = x;
    for (const Hit& h : hits) y = cross_wall(d.walls[h.wall], y, h.travel);
    return y;
}

/// Path-ordered product of wall crossings along the segment from A to B.
inline QTElement transport(const ScatteringDiagram& d, const QTElement& x, const RatVec2& A, const RatVec2& B)
{
    const RatVec2 E = B - A;
    const mpz_class l = lcm(E.x.get_den(), E.y.get_den());
    const Vec2 travel{mpz_class(E.x * l).get_si(), mpz_class(E.y * l).get_si()};
    std::vector<std::pair<Rational, std::size_t>> hits;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        const Wall& w = d.walls[i];
        const Rational den = wedge(E, w.direction);
        if (den == 0) {
            if (wedge(A - w.base, w.direction) == 0) throw PerturbRequired("path runs along a wall");
            continue;
        }
        const Rational lambda = wedge(w.base - A, w.direction) / den;
        if (lambda < 0 || lambda > 1) continue;
        const RatVec2 X = A + E * lambda;
        const auto t = w.param_of(X);
        if (w.kind == WallKind::Ray && *t < 0) continue;
        if ((w.kind == WallKind::Ray && *t == 0) || lambda == 0 || lambda == 1) throw PerturbRequired("path meets a wall endpoint");
        hits.push_back({lambda, i});
    }
    std::sort(hits.begin(), hits.end());
    QTElement y = x;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        const bool shared = (k > 0 && hits[k - 1].first == hits[k].first) || (k + 1 < hits.size() && hits[k + 1].first == hits[k].first);
        if (shared) {
            for (std::size_t m = 0; m < hits.size(); ++m)
                if (m != k && hits[m].first == hits[k].first && wedge(d.walls[hits[m].second].direction, d.walls[hits[k].second].direction) != 0)
                    throw PerturbRequired("path through a singular point");
        }
        y = cross_wall(d.walls[hits[k].second], y, travel);
    }
    return y;
}

/// Loop identity on z^(1,0), z^(0,1) at every singular point.
inline bool check_consistency(const ScatteringDiagram& d)
{
    const auto e1 = QTElement::monomial(d.ring, {1, 0});
    const auto e2 = QTElement::monomial(d.ring, {0, 1});
    for (const auto& p : singular_points(d))
        if (local_loop(d, p, e1) != e1 || local_loop(d, p, e2) != e2) return false;
    return true;
}

/// Order-by-order consistent completion.
inline ScatteringDiagram complete_to_consistency(ScatteringDiagram d)
{
    int kmax = d.ring.max_degree();
    if (d.ring.total_cap >= 0) kmax = std::min(kmax, d.ring.total_cap);
    for (int k = 1; k <= kmax; ++k) {
        for (const RatVec2& p : singular_points(d)) {
            const QTElement Z = local_log(d, p, k);
            const int low = Z.min_degree();
            if (low < 0) continue;
            if (low < k) throw InternalError("completion: uncancelled term of degree " + std::to_string(low) + " at order " + std::to_string(k));
            std::map<Vec2, QTElement> parts;
            const QTElement Zk = Z.degree_part(k);
            for (const auto& [key, c] : Zk.terms()) {
                if (key.exp.is_zero()) throw InternalError("completion: central term in loop logarithm");
                auto [it, fresh] = parts.try_emplace(primitive(key.exp), QTElement(d.ring));
                it->second.add_term(key.exp, key.mono, c * QCoeff(kOrientation));
            }
            for (auto& [dir, h] : parts) {
                auto same = std::find_if(d.walls.begin(), d.walls.end(), [&](const Wall& w) {
                    return !w.is_initial() && w.base == p && w.direction == dir;
                });
                if (same != d.walls.end()) {
                    QTElement merged = same->hamiltonian.element() + h;
                    if (merged.is_zero()) {
                        d.walls.erase(same);
                    } else {
                        same->hamiltonian = Hamiltonian(dir, merged);
                    }
                } else {
                    Provenance pr;
                    pr.kind = Provenance::Kind::Added;
                    pr.order = k;
                    d.walls.push_back({p, dir, WallKind::Ray, Hamiltonian(dir, h), pr});
                }
            }
        }
    }
    d.consistent = check_consistency(d);
    if (!d.consistent) throw InternalError("completion failed to certify consistency");
    d.certified_order = kmax;
    return d;
}

/// Factored wall indices (j, l, A) with |A| = l.
struct FactoredIndex {
    int j;
    int l;
    unsigned A;
    auto operator<=>(const FactoredIndex&) const = default;
};

inline std::vector<FactoredIndex> factored_indices(int n, int N)
{
    std::vector<FactoredIndex> out;
    for (int j = 0; j < n; ++j)
        for (int l = 1; l <= N; ++l)
            for (unsigned A = 1; A < (1u << N); ++A)
                if (std::popcount(A) == l) out.push_back({j, l, A});
    return out;
}

inline Mono u_monomial(const BaseRing& r, int j, unsigned A)
{
    Mono m = 0;
    for (int a = 0; a < r.N; ++a)
        if (A >> a & 1u) m |= BaseRing::var(r.var_index(j, a));
    return m;
}

inline mpz_class factorial(int n)
{
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Seeded sampler of rationals in (-1/2, 1/2).
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}
    Rational next()
    {
        constexpr long den = 9973;
        Rational r(static_cast<long>(rng_() % den) - den / 2, den);
        r.canonicalize();
        return r;
    }
    RatVec2 next_point() { Rational a = next(); return {a, next()}; }

private:
    std::mt19937_64 rng_;
};

inline std::map<FactoredIndex, RatVec2> sample_offsets(int n, int N, std::uint64_t seed)
{
    RationalSampler rs(seed);
    std::map<FactoredIndex, RatVec2> out;
    for (const auto& idx : factored_indices(n, N)) out[idx] = rs.next_point();
    return out;
}

/// Rejects coincident parallel lines and concurrent triples.
inline void validate_generic_lines(const std::vector<Wall>& walls)
{
    for (std::size_t a = 0; a < walls.size(); ++a)
        for (std::size_t b = a + 1; b < walls.size(); ++b) {
            if (wedge(walls[a].direction, walls[b].direction) == 0) {
                if (walls[a].param_of(walls[b].base)) throw PerturbRequired("coincident walls " + walls[a].provenance.str() + " " + walls[b].provenance.str());
                continue;
            }
            const auto p = support_intersection(walls[a], walls[b]);
            for (std::size_t c = b + 1; c < walls.size(); ++c)
                if (p && walls[c].contains(*p))
                    throw PerturbRequired("concurrent walls " + walls[a].provenance.str() + " " + walls[b].provenance.str() + " " + walls[c].provenance.str());
        }
}

inline ScatteringDiagram build_factored_diagram(const std::vector<Vec2>& m, int N, const std::map<FactoredIndex, RatVec2>& offsets)
{
    ScatteringDiagram d;
    d.ring = BaseRing::sqzero(static_cast<int>(m.size()), N);
    d.ring.validate();
    d.m = m;
    for (const auto& idx : factored_indices(static_cast<int>(m.size()), N)) {
        const Vec2 mj = m[idx.j];
        if (mj.is_zero()) throw ConfigError("zero vector in m");
        auto it = offsets.find(idx);
        if (it == offsets.end()) throw ConfigError("missing offset for factored wall");
        QTElement h(d.ring);
        h.add_term(mj * idx.l, u_monomial(d.ring, idx.j, idx.A), initial_coefficient(idx.l) * QCoeff(mpq_class(factorial(idx.l))));
        Provenance pr{Provenance::Kind::Factored, 0, idx.j, idx.l, idx.A};
        d.walls.push_back({it->second, primitive(mj), WallKind::Line, Hamiltonian(primitive(mj), h), pr});
    }
    validate_generic_lines(d.walls);
    return d;
}

/// Image of a t-series element under t_j -> sum_a u_{ja}.
inline QTElement embed_split(const QTElement& x, const BaseRing& sq)
{
    QTElement out(sq);
    for (const auto& [key, c] : x.terms()) {
        std::vector<std::pair<Mono, QCoeff>> acc{{0, c}};
        for (int j = 0; j < x.ring().n; ++j) {
            const int e = BaseRing::exponent(key.mono, j);
            if (e == 0) continue;
            std::vector<std::pair<Mono, QCoeff>> next;
            for (unsigned A = 1; A < (1u << sq.N); ++A) {
                if (std::popcount(A) != e) continue;
                for (const auto& [m0, c0] : acc)
                    next.emplace_back(m0 | u_monomial(sq, j, A), c0 * QCoeff(mpq_class(factorial(e))));
            }
            acc = std::move(next);
        }
        for (const auto& [m0, c0] : acc) out.add_term(key.exp, m0, c0);
    }
    return out;
}

} // namespace qmirror
