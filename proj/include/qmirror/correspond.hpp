#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>
#include <string>
#include <vector>

#include "qmirror/broken_lines.hpp"
#include "qmirror/tropical.hpp"
#include "qmirror/useries.hpp"

namespace qmirror {

/// Multiplicity profile p with parts k[j][l-1] = k_{lj}.
struct Partition {
    std::vector<int> p;
    std::vector<std::vector<int>> k;

    int size() const
    {
        int s = 0;
        for (const auto& kj : k)
            for (int x : kj) s += x;
        return s;
    }
};

/// All k with sum_l l*k_{lj} = p_j for every j.
inline std::vector<Partition> partitions_of(const std::vector<int>& p)
{
    std::vector<Partition> out{{p, {}}};
    for (int pj : p) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur(std::max(pj, 0), 0);
        std::function<void(int, int)> rec = [&](int rest, int l) {
            if (rest == 0) {
                parts.push_back(cur);
                return;
            }
            if (l > rest) return;
            for (int c = 0; c * l <= rest; ++c) {
                cur[l - 1] = c;
                rec(rest - c * l, l + 1);
            }
            cur[l - 1] = 0;
        };
        rec(pj, 1);
        std::vector<Partition> next;
        for (const auto& base : out)
            for (const auto& kj : parts) {
                Partition q = base;
                q.k.push_back(kj);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

/// Profiles p within the ring caps.
inline std::vector<std::vector<int>> profiles(int n, int N)
{
    std::vector<std::vector<int>> out{{}};
    for (int j = 0; j < n; ++j) {
        std::vector<std::vector<int>> next;
        for (const auto& p : out)
            for (int x = 0; x <= N; ++x) {
                auto q = p;
                q.push_back(x);
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

inline Mono t_monomial(const std::vector<int>& p)
{
    Mono m = 0;
    for (std::size_t j = 0; j < p.size(); ++j) m |= BaseRing::var(static_cast<int>(j), p[j]);
    return m;
}

/// ((-1)^{l-1}/l) * (s - s^-1)/(s^l - s^-l).
inline QCoeff leg_factor(int l)
{
    return QCoeff(mpq_class(l % 2 ? 1 : -1, l)) * s_diff(1) / s_diff(l);
}

/// Tropical degree of the scatter-to-tropical identity for one partition.
inline TropicalDegree corollary_degree(const std::vector<Vec2>& m, const std::vector<Vec2>& theta, const Partition& k, std::uint64_t seed)
{
    RationalSampler rs(seed);
    TropicalDegree deg;
    for (std::size_t j = 0; j < m.size(); ++j)
        for (std::size_t l = 1; l <= k.k[j].size(); ++l)
            for (int c = 0; c < k.k[j][l - 1]; ++c)
                deg.ends.push_back({m[j] * -static_cast<std::int64_t>(l), true, rs.next_point(), -1});
    for (Vec2 r : theta) deg.ends.push_back({r, false, {}, -1});
    deg.points.push_back({rs.next_point(), static_cast<int>(theta.size()) - 2});
    return deg;
}

/// Refined count agreed on by three independent draws.
template <class Build>
QCoeff certified_count(Build build, std::uint64_t seed)
{
    const QCoeff a = refined_count(build(seed));
    for (std::uint64_t d = 1; d <= 2; ++d)
        if (!(refined_count(build(seed + 1000 * d)) == a))
            throw PerturbRequired("perturb configuration: refined count changed between draws (seed " + std::to_string(seed) + ")");
    return a;
}

struct TermCheck {
    std::vector<int> p;
    QCoeff lhs;
    QCoeff rhs;
    bool pass() const { return lhs == rhs; }
};

struct CorollaryReport {
    RatVec2 Q;
    std::vector<TermCheck> terms;
    bool pass() const
    {
        return std::all_of(terms.begin(), terms.end(), [](const TermCheck& t) { return t.pass(); });
    }
};

/// Tropical side of the scatter-to-tropical identity, per profile p.
inline std::map<std::vector<int>, QCoeff> corollary_rhs(const std::vector<Vec2>& m, const std::vector<Vec2>& theta, int N, std::uint64_t seed)
{
    std::map<std::vector<int>, QCoeff> out;
    Vec2 target;
    for (Vec2 r : theta) target += r;
    for (const auto& p : profiles(static_cast<int>(m.size()), N)) {
        Vec2 sum;
        for (std::size_t j = 0; j < m.size(); ++j) sum += m[j] * p[j];
        QCoeff total;
        if (sum == target) {
            for (const auto& k : partitions_of(p)) {
                QCoeff factor(1);
                for (const auto& kj : k.k)
                    for (std::size_t l = 1; l <= kj.size(); ++l)
                        factor *= pow(leg_factor(static_cast<int>(l)), kj[l - 1]) / QCoeff(mpq_class(factorial(kj[l - 1])));
                const QCoeff n = certified_count([&](std::uint64_t sd) { return corollary_degree(m, theta, k, sd); }, seed);
                total += n * factor;
            }
        }
        out[p] = total;
    }
    return out;
}

inline CorollaryReport scatter_to_tropical_check(const std::vector<Vec2>& m, const std::vector<Vec2>& theta, int N, std::uint64_t seed)
{
    const auto d = complete_to_consistency(build_initial_diagram(m, N));
    CorollaryReport rep;
    rep.Q = sample_endpoint(d, seed);
    const BaseSeries lhs = sym_bracket(d, theta, rep.Q);
    for (const auto& [p, rhs] : corollary_rhs(m, theta, N, seed)) rep.terms.push_back({p, lhs.coeff(t_monomial(p)), rhs});
    return rep;
}

/// ((-1)^{l-1}/l) / (2 sin(l u / 2)).
inline USeries multicover_series(int l, int K)
{
    return u_expand(QCoeff(1) / s_diff(l), K).scaled(Gauss(0, mpq_class(l % 2 ? 1 : -1, l)));
}

struct GWPrediction {
    std::vector<Vec2> m;
    std::vector<Vec2> theta;
    int N = 0;
    int K = 0;
    std::map<std::vector<int>, USeries> series;

    /// Every series has only even powers with real coefficients.
    bool shape_ok() const
    {
        return std::all_of(series.begin(), series.end(), [](const auto& kv) { return kv.second.only_even_powers() && kv.second.is_real(); });
    }
};

/// u-expansion of the symmetrized bracket on the completed diagram.
inline GWPrediction theorem_a_rhs(const std::vector<Vec2>& m, const std::vector<Vec2>& theta, int N, int K, std::uint64_t seed)
{
    const auto d = complete_to_consistency(build_initial_diagram(m, N));
    const BaseSeries b = sym_bracket(d, theta, sample_endpoint(d, seed));
    GWPrediction g{m, theta, N, K, {}};
    for (const auto& p : profiles(static_cast<int>(m.size()), N)) g.series[p] = u_expand(b.coeff(t_monomial(p)), K);
    if (!g.shape_ok()) throw InternalError("odd or imaginary residue in a certified u-series");
    return g;
}

/// Assembly from tropical counts and multicover series, without broken lines.
inline GWPrediction gw_to_toric_assembly(const std::vector<Vec2>& m, const std::vector<Vec2>& theta, int N, int K, std::uint64_t seed)
{
    GWPrediction g{m, theta, N, K, {}};
    Vec2 target;
    for (Vec2 r : theta) target += r;
    for (const auto& p : profiles(static_cast<int>(m.size()), N)) {
        Vec2 sum;
        for (std::size_t j = 0; j < m.size(); ++j) sum += m[j] * p[j];
        USeries total(0, K);
        if (sum == target) {
            for (const auto& k : partitions_of(p)) {
                const int sk = k.size();
                const QCoeff n = certified_count([&](std::uint64_t sd) { return corollary_degree(m, theta, k, sd); }, seed);
                mpq_class prefactor = 1;
                for (std::size_t j = 0; j < m.size(); ++j)
                    for (std::size_t l = 1; l <= k.k[j].size(); ++l)
                        for (int c = 0; c < k.k[j][l - 1]; ++c) prefactor /= lattice_length(m[j] * static_cast<std::int64_t>(l));
                Gauss phase(1);
                for (int i = 0; i < sk; ++i) phase = phase * Gauss(0, -1);
                USeries term = u_expand(n * pow(s_diff(1), sk), K + sk).scaled(phase * Gauss(prefactor));
                for (std::size_t j = 0; j < m.size(); ++j)
                    for (std::size_t l = 1; l <= k.k[j].size(); ++l) {
                        const int kl = k.k[j][l - 1];
                        if (kl == 0) continue;
                        mpq_class c = 1;
                        for (int i = 0; i < kl; ++i) c *= static_cast<long>(l);
                        c /= mpq_class(factorial(kl));
                        const USeries f = multicover_series(static_cast<int>(l), K);
                        for (int i = 0; i < kl; ++i) term = term * f;
                        term = term.scaled(Gauss(c));
                    }
                total = total + term;
            }
        }
        g.series[p] = total.truncated(K);
    }
    return g;
}

struct SeriesCheck {
    std::vector<int> p;
    USeries a;
    USeries b;
    bool pass() const { return a.agrees_with(b); }
};

inline std::vector<SeriesCheck> compare_predictions(const GWPrediction& a, const GWPrediction& b)
{
    std::vector<SeriesCheck> out;
    for (const auto& [p, sa] : a.series) {
        auto it = b.series.find(p);
        out.push_back({p, sa, it == b.series.end() ? USeries(0, a.K) : it->second});
    }
    return out;
}

struct RayCurveEntry {
    std::size_t wall = 0;      // index of the added wall, or npos for an unmatched curve
    Vec2 exponent;
    Mono mono = 0;
    QCoeff actual;
    QCoeff expected;
    int curves = 0;            // number of tropical curves matched to the term
    bool pass() const { return curves == 1 && actual == expected; }
};

struct RayCurveReport {
    std::vector<RayCurveEntry> entries;
    std::size_t curve_count = 0;
    std::size_t term_count = 0;
    bool pass() const
    {
        return curve_count == term_count && std::all_of(entries.begin(), entries.end(), [](const RayCurveEntry& e) { return e.pass(); });
    }
};

/// Matches the added walls of a completed factored diagram with rigid tropical curves.
inline RayCurveReport ray_curve_check(const ScatteringDiagram& d)
{
    if (d.ring.kind != BaseRing::Kind::SqZero) throw Error("ray_curve_check needs a factored diagram");
    std::vector<std::size_t> initial;
    for (std::size_t i = 0; i < d.walls.size(); ++i)
        if (d.walls[i].provenance.kind == Provenance::Kind::Factored) initial.push_back(i);

    struct Expected {
        QCoeff coeff;
        int curves = 0;
    };
    std::map<std::tuple<RatVec2, Vec2, Vec2, Mono>, Expected> predicted;
    std::size_t curve_count = 0;

    // leg sets: at most one leg per wall, disjoint index sets within each group
    std::vector<std::size_t> legs;
    std::function<void(std::size_t, std::vector<unsigned>&)> rec = [&](std::size_t i, std::vector<unsigned>& used) {
        if (i == initial.size()) {
            if (legs.size() < 2) return;
            TropicalDegree deg;
            Vec2 out_dir;
            Mono mono = 0;
            QCoeff factor(1);
            for (std::size_t li : legs) {
                const Wall& w = d.walls[li];
                const Vec2 v = d.m[w.provenance.j] * w.provenance.l;
                deg.ends.push_back({-v, true, w.base, -1});
                out_dir += v;
                mono |= u_monomial(d.ring, w.provenance.j, w.provenance.A);
                factor *= leg_factor(w.provenance.l) * QCoeff(mpq_class(factorial(w.provenance.l)));
            }
            if (out_dir.is_zero()) return;
            deg.ends.push_back({out_dir, false, {}, -1});
            const std::size_t out_label = deg.ends.size() - 1;
            for (const auto& c : enumerate_rigid_curves(deg)) {
                ++curve_count;
                RatVec2 base;
                for (const auto& e : c.edges)
                    if (e.b < 0 && e.end == static_cast<int>(out_label)) base = c.vertices[e.a].pos;
                auto& slot = predicted[{base, primitive(out_dir), out_dir, mono}];
                slot.coeff = c.multiplicity * factor / s_diff(1);
                ++slot.curves;
            }
            return;
        }
        rec(i + 1, used);
        const Wall& w = d.walls[initial[i]];
        if (used[w.provenance.j] & w.provenance.A) return;
        used[w.provenance.j] |= w.provenance.A;
        legs.push_back(initial[i]);
        rec(i + 1, used);
        legs.pop_back();
        used[w.provenance.j] &= ~w.provenance.A;
    };
    std::vector<unsigned> used(d.m.size(), 0);
    rec(0, used);

    RayCurveReport rep;
    rep.curve_count = curve_count;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        const Wall& w = d.walls[i];
        if (w.is_initial()) continue;
        for (const auto& [key, c] : w.hamiltonian.element().terms()) {
            ++rep.term_count;
            RayCurveEntry e{i, key.exp, key.mono, c, QCoeff(), 0};
            auto it = predicted.find({w.base, w.direction, key.exp, key.mono});
            if (it != predicted.end()) {
                e.expected = it->second.coeff;
                e.curves = it->second.curves;
                predicted.erase(it);
            }
            rep.entries.push_back(e);
        }
    }
    for (const auto& [key, ex] : predicted) {
        RayCurveEntry e{static_cast<std::size_t>(-1), std::get<2>(key), std::get<3>(key), QCoeff(), ex.coeff, ex.curves};
        rep.entries.push_back(e);
    }
    return rep;
}

} // namespace qmirror
