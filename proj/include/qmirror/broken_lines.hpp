#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "qmirror/scattering.hpp"

namespace qmirror {

// Broken lines are reported in the labeling z^m -> z^-m of the stored diagram:
// a segment with reported exponent v travels in direction -v, and a bend at a
// wall of direction m_d changes v by a negative multiple of m_d.

struct BLSegment {
    Vec2 exponent;                // reported exponent v
    QCoeff coeff;                 // scalar part of the monomial
    Mono mono = 0;                // base monomial of the monomial
    std::optional<RatVec2> start; // bend point; empty for the unbounded first segment
    int wall = -1;                // index of the wall bent at
};

struct BrokenLine {
    RatVec2 Q;
    Vec2 r;
    std::vector<BLSegment> segments;

    Vec2 v() const { return segments.back().exponent; }
    const QCoeff& coeff() const { return segments.back().coeff; }
    Mono mono() const { return segments.back().mono; }
};

namespace detail {

struct BendStep {
    std::vector<int> walls;   // collinear walls through the bend point
    RatVec2 point;
    Vec2 p_before;
    Mono mu_before;
    Vec2 p_after;
    Mono mu_after;
};

class BrokenLineSearch {
public:
    BrokenLineSearch(const ScatteringDiagram& d, Vec2 r, RatVec2 Q) : d_(d), r_(r), Q_(std::move(Q)) {}

    std::vector<BrokenLine> run()
    {
        for (std::size_t i = 0; i < d_.walls.size(); ++i)
            if (d_.walls[i].contains(Q_)) throw PerturbRequired("perturb Q: endpoint lies on a wall");
        std::vector<BrokenLine> out;
        for (Mono mu : d_.ring.all_monomials()) {
            const Vec2 p = d_.ring.phi(mu, d_.m) - r_;
            if (p.is_zero()) continue;
            std::vector<BendStep> path;
            search(Q_, p, mu, path, out);
        }
        std::sort(out.begin(), out.end(), [](const BrokenLine& a, const BrokenLine& b) {
            return std::tuple(a.v(), a.mono(), a.segments.size()) < std::tuple(b.v(), b.mono(), b.segments.size());
        });
        return out;
    }

private:
    // Backward from X along -p, looking for the bend that produced (p, mu).
    void search(const RatVec2& X, Vec2 p, Mono mu, std::vector<BendStep>& path, std::vector<BrokenLine>& out)
    {
        if (mu == 0) {
            if (p == -r_) emit(path, out);
            return;
        }
        struct Hit {
            Rational tau;
            int wall;
        };
        std::vector<Hit> hits;
        const RatVec2 back(-p);
        for (std::size_t i = 0; i < d_.walls.size(); ++i) {
            const Wall& w = d_.walls[i];
            const Rational den = wedge(back, w.direction);
            if (den == 0) {
                if (wedge(X - w.base, w.direction) == 0 && !w.contains(X))
                    throw PerturbRequired("perturb Q: segment runs along a wall");
                continue;
            }
            // X + tau*back = base + t*dir
            const Rational tau = wedge(w.base - X, w.direction) / den;
            if (tau <= 0) continue;
            const RatVec2 P = X + back * tau;
            auto t = w.param_of(P);
            if (w.kind == WallKind::Ray) {
                if (*t < 0) continue;
                if (*t == 0) throw PerturbRequired("perturb Q: segment meets a ray endpoint");
            }
            hits.push_back({tau, static_cast<int>(i)});
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return std::tie(a.tau, a.wall) < std::tie(b.tau, b.wall); });
        for (std::size_t i = 0; i < hits.size();) {
            // walls met at the same point; parallel ones commute and act together
            std::vector<int> group;
            std::size_t j = i;
            for (; j < hits.size() && hits[j].tau == hits[i].tau; ++j) group.push_back(hits[j].wall);
            const Vec2 dir = d_.walls[group[0]].direction;
            const bool singular = std::any_of(group.begin(), group.end(), [&](int g) { return wedge(d_.walls[g].direction, dir) != 0; });
            // opposite walls on one line can change the coefficient without turning the line
            const bool two_sided = std::any_of(group.begin(), group.end(), [&](int g) {
                const Vec2 wd = d_.walls[g].direction;
                return wd.x * dir.x + wd.y * dir.y < 0;
            });
            const RatVec2 P = X + back * hits[i].tau;
            for (Mono nu : d_.ring.all_monomials()) {
                if (nu == 0) continue;
                auto rest = d_.ring.div(mu, nu);
                if (!rest || d_.ring.mul(*rest, nu) != mu) continue;
                const Vec2 shift = d_.ring.phi(nu, d_.m);
                const bool along = two_sided ? wedge(shift, dir) == 0 : std::any_of(group.begin(), group.end(), [&](int g) {
                    const Vec2 wd = d_.walls[g].direction;
                    return !shift.is_zero() && wedge(shift, wd) == 0 && shift.x * wd.x + shift.y * wd.y > 0;
                });
                if (!along) continue;
                if (singular) throw PerturbRequired("perturb Q: broken line through a singular point");
                const Vec2 pb = p - shift;
                if (pb.is_zero()) continue;
                path.push_back({group, P, pb, *rest, p, mu});
                search(P, pb, *rest, path, out);
                path.pop_back();
            }
            i = j;
        }
    }

    // Image of z^p after crossing a group of collinear walls while travelling along p.
    const QTElement& image(const std::vector<int>& walls, Vec2 p)
    {
        auto key = std::pair(walls, p);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        QTElement H(d_.ring);
        for (int g : walls) {
            const Wall& w = d_.walls[g];
            H += crossing_sign(w, p) > 0 ? w.hamiltonian.element() : -w.hamiltonian.element();
        }
        const QTElement x = QTElement::monomial(d_.ring, p);
        return cache_.emplace(key, qt_conjugate_by_exp(H, x, 1)).first->second;
    }

    void emit(const std::vector<BendStep>& back_path, std::vector<BrokenLine>& out)
    {
        BrokenLine bl;
        bl.Q = Q_;
        bl.r = r_;
        bl.segments.push_back({r_, QCoeff(1), 0, std::nullopt, -1});
        QCoeff c(1);
        for (auto it = back_path.rbegin(); it != back_path.rend(); ++it) {
            const Mono nu = *d_.ring.div(it->mu_after, it->mu_before);
            const QCoeff f = image(it->walls, it->p_before).coefficient(it->p_after).coeff(nu);
            if (f.is_zero()) return;
            c *= f;
            bl.segments.push_back({-it->p_after, c, it->mu_after, it->point, it->walls.front()});
        }
        out.push_back(std::move(bl));
    }

    const ScatteringDiagram& d_;
    Vec2 r_;
    RatVec2 Q_;
    std::map<std::pair<std::vector<int>, Vec2>, QTElement> cache_;
};

} // namespace detail

/// All broken lines with initial exponent r ending at Q, modulo the ring caps.
inline std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& d, Vec2 r, const RatVec2& Q)
{
    if (r.is_zero()) throw Error("broken lines need a nonzero initial exponent");
    return detail::BrokenLineSearch(d, r, Q).run();
}

inline QTElement theta_function(const ScatteringDiagram& d, Vec2 r, const RatVec2& Q)
{
    if (r.is_zero()) return QTElement::one(d.ring);
    QTElement out(d.ring);
    for (const auto& bl : enumerate_broken_lines(d, r, Q)) out.add_term(bl.v(), bl.mono(), bl.coeff());
    return out;
}

/// z^m -> z^-m; theta functions live in this labeling relative to the walls.
inline QTElement dual_labeling(const QTElement& x)
{
    QTElement y(x.ring());
    for (const auto& [k, c] : x.terms()) y.add_term(-k.exp, k.mono, c);
    return y;
}

/// Broken lines and theta functions at a fixed endpoint, computed once per exponent.
class ThetaCache {
public:
    ThetaCache(const ScatteringDiagram& d, const RatVec2& Q) : d_(d), Q_(Q) {}

    const ScatteringDiagram& diagram() const { return d_; }
    const RatVec2& endpoint() const { return Q_; }

    const std::vector<BrokenLine>& lines(Vec2 r)
    {
        auto it = lines_.find(r);
        if (it == lines_.end()) it = lines_.emplace(r, enumerate_broken_lines(d_, r, Q_)).first;
        return it->second;
    }

    const QTElement& theta(Vec2 r)
    {
        auto it = theta_.find(r);
        if (it != theta_.end()) return it->second;
        QTElement out = QTElement::one(d_.ring);
        if (!r.is_zero()) {
            out = QTElement(d_.ring);
            for (const auto& bl : lines(r)) out.add_term(bl.v(), bl.mono(), bl.coeff());
        }
        return theta_.emplace(r, std::move(out)).first->second;
    }

private:
    const ScatteringDiagram& d_;
    RatVec2 Q_;
    std::map<Vec2, std::vector<BrokenLine>> lines_;
    std::map<Vec2, QTElement> theta_;
};

/// Sum over tuples with sum of v zero, weighted by prod_{2<=i<j} s^{v_i ^ v_j}.
inline BaseSeries bracket_direct(ThetaCache& cache, const std::vector<Vec2>& theta)
{
    const ScatteringDiagram& d = cache.diagram();
    struct Leaf {
        Vec2 v;
        QCoeff c;
        Mono mono;
    };
    std::vector<std::vector<Leaf>> lines;
    for (Vec2 r : theta) {
        std::vector<Leaf> ls;
        if (r.is_zero()) {
            ls.push_back({{0, 0}, QCoeff(1), 0});
        } else {
            for (const auto& bl : cache.lines(r)) ls.push_back({bl.v(), bl.coeff(), bl.mono()});
        }
        lines.push_back(std::move(ls));
    }
    BaseSeries out(d.ring);
    const std::size_t n = theta.size();
    // tail sums of v are not bounded a priori, so recurse over all choices
    std::function<void(std::size_t, Vec2, Vec2, long, QCoeff, Mono)> rec =
        [&](std::size_t i, Vec2 total, Vec2 tail, long w, QCoeff c, Mono mono) {
            if (i == n) {
                if (total.is_zero()) out.add_term(mono, c * QCoeff::s_pow(static_cast<int>(w)));
                return;
            }
            for (const Leaf& l : lines[i]) {
                auto m = d.ring.mul(mono, l.mono);
                if (!m) continue;
                // pairs (j, i) with 2 <= j < i (1-based) contribute tail ^ v_i
                const long dw = i >= 2 ? static_cast<long>(wedge(tail, l.v)) : 0;
                rec(i + 1, total + l.v, i >= 1 ? tail + l.v : tail, w + dw, c * l.c, *m);
            }
        };
    rec(0, {0, 0}, {0, 0}, 0, QCoeff(1), 0);
    return out;
}

inline BaseSeries bracket_direct(const ScatteringDiagram& d, const std::vector<Vec2>& theta, const RatVec2& Q)
{
    ThetaCache cache(d, Q);
    return bracket_direct(cache, theta);
}

/// z^0 coefficient of x*y; z^e z^-e has no s-twist.
inline BaseSeries zero_coefficient(const QTElement& x, const QTElement& y)
{
    const BaseRing& ring = x.ring();
    BaseSeries out(ring);
    for (const auto& [kx, cx] : x.terms()) {
        const Vec2 e = -kx.exp;
        for (auto it = y.terms().lower_bound(QTKey{e, 0}); it != y.terms().end() && it->first.exp == e; ++it)
            if (auto m = ring.mul(kx.mono, it->first.mono)) out.add_term(*m, cx * it->second);
    }
    return out;
}

/// z^0 coefficient of the ordered product of theta functions.
inline BaseSeries bracket_via_product(ThetaCache& cache, const std::vector<Vec2>& theta)
{
    QTElement prod = QTElement::one(cache.diagram().ring);
    if (theta.empty()) return prod.coefficient({0, 0});
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) prod = prod * cache.theta(theta[i]);
    return zero_coefficient(prod, cache.theta(theta.back()));
}

inline BaseSeries bracket_via_product(const ScatteringDiagram& d, const std::vector<Vec2>& theta, const RatVec2& Q)
{
    ThetaCache cache(d, Q);
    return bracket_via_product(cache, theta);
}

enum class CyclicRep { FirstIndexFirst, FirstIndexLast };

/// (1/(s-1)!) sum over cyclic orderings of bracket_via_product.
inline BaseSeries sym_bracket(ThetaCache& cache, const std::vector<Vec2>& theta, CyclicRep rep = CyclicRep::FirstIndexFirst)
{
    const std::size_t n = theta.size();
    if (n < 2) throw Error("symmetrized bracket needs at least two inputs");
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    BaseSeries acc(cache.diagram().ring);
    long classes = 0;
    do {
        std::vector<Vec2> ordered;
        if (rep == CyclicRep::FirstIndexFirst) ordered.push_back(theta[0]);
        for (std::size_t i : rest) ordered.push_back(theta[i]);
        if (rep == CyclicRep::FirstIndexLast) ordered.push_back(theta[0]);
        acc = acc + bracket_via_product(cache, ordered);
        ++classes;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return acc.scaled(QCoeff(mpq_class(1, classes)));
}

inline BaseSeries sym_bracket(const ScatteringDiagram& d, const std::vector<Vec2>& theta, const RatVec2& Q,
                              CyclicRep rep = CyclicRep::FirstIndexFirst)
{
    ThetaCache cache(d, Q);
    return sym_bracket(cache, theta, rep);
}

/// Endpoint away from every wall, sampled from the seed.
inline RatVec2 sample_endpoint(const ScatteringDiagram& d, std::uint64_t seed)
{
    RationalSampler rs(seed);
    for (;;) {
        const RatVec2 q = rs.next_point();
        if (std::none_of(d.walls.begin(), d.walls.end(), [&](const Wall& w) { return w.contains(q); })) return q;
    }
}

} // namespace qmirror
