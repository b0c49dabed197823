#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qmirror/qcoeff.hpp"
#include "qmirror/lattice.hpp"
#include "qmirror/error.hpp"

namespace qmirror {

/// Block-Goettsche multiplicity [|a ^ b|]_s.
inline QCoeff bg_multiplicity(Vec2 a, Vec2 b)
{
    const auto w = wedge(a, b);
    if (w == 0) throw Error("degenerate trivalent vertex");
    return quantum_int(static_cast<int>(w < 0 ? -w : w));
}

/// (1/(m-1)!) sum over cyclic orderings of s^{k}, k = sum_{2<=i<j} a_i ^ a_j.
inline QCoeff pointed_multiplicity(const std::vector<Vec2>& a)
{
    if (a.size() < 2) throw Error("pointed vertex needs at least two edges");
    Vec2 total;
    for (Vec2 v : a) total += v;
    if (!total.is_zero()) throw Error("unbalanced pointed vertex");
    std::vector<std::size_t> rest(a.size() - 1);
    std::iota(rest.begin(), rest.end(), 1);
    QCoeff acc;
    long classes = 0;
    do {
        long k = 0;
        Vec2 tail;
        for (std::size_t i : rest) {
            k += wedge(tail, a[i]);
            tail += a[i];
        }
        acc += QCoeff::s_pow(static_cast<int>(k));
        ++classes;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return acc * QCoeff(mpq_class(1, classes));
}

struct TropicalEnd {
    Vec2 dir;             // outward direction with weight
    bool fixed = false;
    RatVec2 offset;       // the end lies on offset + R*dir when fixed
    int cls = -1;         // free ends with equal cls >= 0 are interchangeable
};

struct MarkedPoint {
    RatVec2 pos;
    int k = 0;            // supporting vertex has valency k + 2
};

struct TropicalDegree {
    std::vector<TropicalEnd> ends;
    std::vector<MarkedPoint> points;
};

struct TropicalCurve {
    struct Vertex {
        RatVec2 pos;
        int marked = -1;
        QCoeff mult;
    };
    struct Edge {
        int a;
        int b;             // -1 for an unbounded edge
        Vec2 weight;       // direction from a towards b (or outward)
        Rational length;   // 0 for unbounded edges
        int end = -1;      // end label for unbounded edges
    };
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    QCoeff multiplicity;

    bool balanced() const
    {
        std::vector<Vec2> sum(vertices.size());
        for (const Edge& e : edges) {
            sum[e.a] += e.weight;
            if (e.b >= 0) sum[e.b] += -e.weight;
        }
        return std::all_of(sum.begin(), sum.end(), [](Vec2 v) { return v.is_zero(); });
    }

    bool embedding_consistent() const
    {
        for (const Edge& e : edges)
            if (e.b >= 0 && !(vertices[e.b].pos == vertices[e.a].pos + RatVec2(e.weight) * e.length)) return false;
        return true;
    }

    /// Position-based key, invariant under relabeling of interchangeable ends.
    std::string signature() const
    {
        std::vector<std::string> parts;
        for (const Edge& e : edges) {
            const RatVec2& pa = vertices[e.a].pos;
            if (e.b < 0) {
                parts.push_back("U" + to_string(pa) + to_string(e.weight));
            } else {
                std::string x = to_string(pa), y = to_string(vertices[e.b].pos);
                Vec2 w = e.weight;
                if (y < x) { std::swap(x, y); w = -w; }
                parts.push_back("B" + x + y + to_string(w));
            }
        }
        for (const Vertex& v : vertices) parts.push_back("V" + to_string(v.pos) + std::to_string(v.marked));
        std::sort(parts.begin(), parts.end());
        std::string out;
        for (const auto& p : parts) out += p + ";";
        return out;
    }
};

namespace detail {

/// Combinatorial tree: nodes 0..E-1 are ends, later nodes are vertices.
struct TreeType {
    int n_ends = 0;
    std::vector<int> node_mark;                // -1 trivalent, else marked point index (ends unused)
    std::vector<std::pair<int, int>> edges;

    int add_node(int mark)
    {
        node_mark.push_back(mark);
        return static_cast<int>(node_mark.size()) - 1;
    }
    int degree(int v) const
    {
        int d = 0;
        for (auto [a, b] : edges) d += (a == v) + (b == v);
        return d;
    }
    void subdivide(std::size_t e, int v)
    {
        auto [a, b] = edges[e];
        edges[e] = {a, v};
        edges.push_back({v, b});
    }
};

/// Gaussian elimination over Q; returns the unique solution or nothing.
/// Sets rigid = false when the solution space is positive dimensional.
inline std::optional<std::vector<Rational>> solve_unique(std::vector<std::vector<Rational>> rows, int unknowns, bool& rigid)
{
    rigid = true;
    int r = 0;
    std::vector<int> pivots;
    for (int c = 0; c < unknowns && r < static_cast<int>(rows.size()); ++c) {
        int p = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(rows[r], rows[p]);
        const Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational f = rows[i][c];
            for (int k = c; k <= unknowns; ++k) rows[i][k] -= f * rows[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
        if (rows[i][unknowns] != 0) return std::nullopt;
    if (r < unknowns) {
        rigid = false;
        return std::nullopt;
    }
    std::vector<Rational> x(unknowns);
    for (int i = 0; i < r; ++i) x[pivots[i]] = rows[i][unknowns];
    return x;
}

class CurveEnumerator {
public:
    explicit CurveEnumerator(const TropicalDegree& deg) : deg_(deg) {}

    std::vector<TropicalCurve> run()
    {
        const int E = static_cast<int>(deg_.ends.size());
        if (E < 2) return {};
        Vec2 total;
        for (const auto& e : deg_.ends) {
            if (e.dir.is_zero()) throw ConfigError("zero end direction");
            total += e.dir;
        }
        if (!total.is_zero()) return {};
        for (std::size_t i = 0; i < deg_.points.size(); ++i) (deg_.points[i].k >= 1 ? heavy_ : light_).push_back(static_cast<int>(i));
        pure_ = heavy_.empty() && static_cast<int>(light_.size()) == E - 1
            && std::none_of(deg_.ends.begin(), deg_.ends.end(), [](const TropicalEnd& e) { return e.fixed; });
        interchangeable_ = std::any_of(deg_.ends.begin(), deg_.ends.end(), [](const TropicalEnd& e) { return e.cls >= 0; });

        TreeType t;
        t.n_ends = E;
        for (int i = 0; i < E; ++i) t.add_node(-1);
        t.edges.push_back({0, 1});
        std::vector<int> heavy_node(deg_.points.size(), -1);
        grow(t, 2, heavy_node);
        std::sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<TropicalCurve> curves;
        for (auto& [sig, c] : out_) curves.push_back(std::move(c));
        return curves;
    }

private:
    int target(int point) const { return deg_.points[point].k + 2; }

    void grow(TreeType& t, int leaf, std::vector<int>& heavy_node)
    {
        const int E = t.n_ends;
        int need = 0;
        for (int h : heavy_) need += heavy_node[h] < 0 ? target(h) - 2 : target(h) - t.degree(heavy_node[h]);
        if (need > E - leaf) return;
        if (leaf == E) {
            if (need == 0) finish_heavy(t);
            return;
        }
        const std::size_t ne = t.edges.size();
        for (std::size_t e = 0; e < ne; ++e) {
            TreeType u = t;
            const int v = u.add_node(-1);
            u.subdivide(e, v);
            u.edges.push_back({v, leaf});
            grow(u, leaf + 1, heavy_node);
        }
        for (int h : heavy_) {
            if (heavy_node[h] >= 0) {
                if (t.degree(heavy_node[h]) >= target(h)) continue;
                TreeType u = t;
                u.edges.push_back({heavy_node[h], leaf});
                grow(u, leaf + 1, heavy_node);
            } else {
                for (std::size_t e = 0; e < ne; ++e) {
                    TreeType u = t;
                    const int v = u.add_node(h);
                    u.subdivide(e, v);
                    u.edges.push_back({v, leaf});
                    heavy_node[h] = v;
                    grow(u, leaf + 1, heavy_node);
                    heavy_node[h] = -1;
                }
            }
        }
    }

    void finish_heavy(const TreeType& t)
    {
        if (interchangeable_) {
            const std::string key = canonical(t);
            if (!seen_types_.insert(key).second) return;
        }
        if (!directions_ok(t)) return;
        place_light(t, 0);
    }

    // Edge weights from balancing: weight of (a -> b) is the sum of end directions beyond b.
    std::vector<Vec2> weights(const TreeType& t) const
    {
        const int n = static_cast<int>(t.node_mark.size());
        std::vector<std::vector<std::pair<int, int>>> adj(n);
        for (int i = 0; i < static_cast<int>(t.edges.size()); ++i) {
            adj[t.edges[i].first].push_back({t.edges[i].second, i});
            adj[t.edges[i].second].push_back({t.edges[i].first, i});
        }
        std::vector<Vec2> w(t.edges.size());
        std::function<Vec2(int, int)> beyond = [&](int v, int from) -> Vec2 {
            if (v < t.n_ends) return deg_.ends[v].dir;
            Vec2 s;
            for (auto [u, e] : adj[v]) {
                if (u == from) continue;
                const Vec2 b = beyond(u, v);
                w[e] = t.edges[e].first == v ? b : -b;
                s += b;
            }
            return s;
        };
        // root at end 0: the edge at end 0 points towards end 0
        auto [u, e] = adj[0][0];
        const Vec2 b = beyond(u, 0);
        w[e] = t.edges[e].first == u ? -b : b;
        return w;
    }

    bool directions_ok(const TreeType& t) const
    {
        const auto w = weights(t);
        for (Vec2 v : w)
            if (v.is_zero()) return false;
        for (int v = t.n_ends; v < static_cast<int>(t.node_mark.size()); ++v) {
            if (t.node_mark[v] >= 0) continue;
            std::vector<Vec2> out;
            for (std::size_t e = 0; e < t.edges.size(); ++e) {
                if (t.edges[e].first == v) out.push_back(w[e]);
                if (t.edges[e].second == v) out.push_back(-w[e]);
            }
            if (wedge(out[0], out[1]) == 0) return false;
        }
        return true;
    }

    std::string canonical(const TreeType& t) const
    {
        const int n = static_cast<int>(t.node_mark.size());
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : t.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::function<std::string(int, int)> enc = [&](int v, int from) -> std::string {
            if (v < t.n_ends) {
                const auto& e = deg_.ends[v];
                return e.cls >= 0 ? "c" + std::to_string(e.cls) + to_string(e.dir) : "e" + std::to_string(v);
            }
            std::vector<std::string> kids;
            for (int u : adj[v])
                if (u != from) kids.push_back(enc(u, v));
            std::sort(kids.begin(), kids.end());
            std::string s = "(" + std::to_string(t.node_mark[v]);
            for (const auto& k : kids) s += "," + k;
            return s + ")";
        };
        // canonical over all end roots is expensive; root at every end and keep the minimum
        std::string best;
        for (int r = 0; r < t.n_ends; ++r) {
            const std::string s = enc(adj[r][0], r) + enc(r, adj[r][0]);
            if (best.empty() || s < best) best = s;
        }
        return best;
    }

    void place_light(const TreeType& t, std::size_t i)
    {
        if (pure_) {
            place_slots(t, 0, 0);
            return;
        }
        if (i == light_.size()) {
            solve(t);
            return;
        }
        const std::size_t ne = t.edges.size();
        for (std::size_t e = 0; e < ne; ++e) {
            TreeType u = t;
            const int v = u.add_node(light_[i]);
            u.subdivide(e, v);
            place_light(u, i + 1);
        }
    }

    // Pure case: choose the edges carrying marked points first (unlabelled
    // slots, at most one per edge), then let geometry pick the labels.
    void place_slots(const TreeType& t, std::size_t first, std::size_t placed)
    {
        if (placed == light_.size()) {
            assign_labels(t);
            return;
        }
        const std::size_t ne = static_cast<std::size_t>(2 * t.n_ends - 3);
        for (std::size_t e = first; e < ne; ++e) {
            TreeType u = t;
            const int v = u.add_node(kSlot);
            u.subdivide(e, v);
            if (!each_component_has_end(u)) continue;
            place_slots(u, e + 1, placed + 1);
        }
    }

    bool each_component_has_end(const TreeType& t) const
    {
        const int n = static_cast<int>(t.node_mark.size());
        std::vector<std::vector<int>> adj(n);
        for (auto [a, b] : t.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<int> comp(n, -1);
        int nc = 0;
        for (int s = t.n_ends; s < n; ++s) {
            if (comp[s] >= 0 || t.node_mark[s] != -1) continue;
            std::vector<int> st{s};
            comp[s] = nc;
            bool has_end = false;
            while (!st.empty()) {
                const int v = st.back();
                st.pop_back();
                for (int u : adj[v]) {
                    if (u < t.n_ends) { has_end = true; continue; }
                    if (t.node_mark[u] != -1 || comp[u] >= 0) continue;
                    comp[u] = nc;
                    st.push_back(u);
                }
            }
            if (!has_end) return false;
            ++nc;
        }
        // components consisting of a single edge between two marked vertices
        for (auto [a, b] : t.edges)
            if (a >= t.n_ends && b >= t.n_ends && t.node_mark[a] != -1 && t.node_mark[b] != -1) return false;
        return true;
    }

    void solve(const TreeType& t)
    {
        const int n = static_cast<int>(t.node_mark.size());
        if (n == t.n_ends) return; // a bare line is never rigid
        const auto w = weights(t);
        std::vector<int> bounded(t.edges.size(), -1);
        int B = 0;
        for (std::size_t e = 0; e < t.edges.size(); ++e)
            if (t.edges[e].first >= t.n_ends && t.edges[e].second >= t.n_ends) bounded[e] = B++;
        const int U = 2 + B;
        // affine position of each vertex: coefficient rows for x and y, last entry constant
        std::vector<std::vector<Rational>> px(n), py(n);
        std::vector<std::vector<std::pair<int, int>>> adj(n);
        for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
            adj[t.edges[e].first].push_back({t.edges[e].second, e});
            adj[t.edges[e].second].push_back({t.edges[e].first, e});
        }
        const int root = t.n_ends;
        px[root].assign(U + 1, 0);
        py[root].assign(U + 1, 0);
        px[root][0] = 1;
        py[root][1] = 1;
        std::vector<int> order{root};
        for (std::size_t qi = 0; qi < order.size(); ++qi) {
            const int v = order[qi];
            for (auto [u, e] : adj[v]) {
                if (u < t.n_ends || !px[u].empty()) continue;
                const Vec2 dir = t.edges[e].first == v ? w[e] : -w[e];
                px[u] = px[v];
                py[u] = py[v];
                px[u][2 + bounded[e]] += static_cast<long>(dir.x);
                py[u][2 + bounded[e]] += static_cast<long>(dir.y);
                order.push_back(u);
            }
        }
        std::vector<std::vector<Rational>> rows;
        for (int v = t.n_ends; v < n; ++v) {
            if (t.node_mark[v] < 0) continue;
            const RatVec2& p = deg_.points[t.node_mark[v]].pos;
            auto rx = px[v], ry = py[v];
            rx[U] = p.x;
            ry[U] = p.y;
            rows.push_back(std::move(rx));
            rows.push_back(std::move(ry));
        }
        for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
            auto [a, b] = t.edges[e];
            const int leaf = a < t.n_ends ? a : (b < t.n_ends ? b : -1);
            if (leaf < 0 || !deg_.ends[leaf].fixed) continue;
            const int v = leaf == a ? b : a;
            const TropicalEnd& fe = deg_.ends[leaf];
            std::vector<Rational> row(U + 1);
            for (int k = 0; k < U; ++k) row[k] = px[v][k] * static_cast<long>(fe.dir.y) - py[v][k] * static_cast<long>(fe.dir.x);
            row[U] = fe.offset.x * static_cast<long>(fe.dir.y) - fe.offset.y * static_cast<long>(fe.dir.x);
            rows.push_back(std::move(row));
        }
        bool rigid = true;
        auto sol = solve_unique(rows, U, rigid);
        if (!sol) return;
        std::vector<Rational> len(t.edges.size());
        for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
            if (bounded[e] < 0) continue;
            len[e] = (*sol)[2 + bounded[e]];
            if (len[e] == 0) throw PerturbRequired("perturb configuration: tropical curve with a contracted edge");
            if (len[e] < 0) return;
        }
        std::vector<RatVec2> pos(n);
        for (int v = t.n_ends; v < n; ++v)
            for (int k = 0; k < U; ++k) {
                pos[v].x += px[v][k] * (*sol)[k];
                pos[v].y += py[v][k] * (*sol)[k];
            }
        emit(t, w, pos, len);
    }

    // Point conditions only: each component of the curve minus the marked
    // vertices holds one end. Rooting each component at its end, a vertex is
    // the meeting point of the lines through its two children, so labels are
    // tried bottom-up and a branch dies as soon as an edge length is <= 0.
    void assign_labels(const TreeType& t)
    {
        const int n = static_cast<int>(t.node_mark.size());
        const auto w = weights(t);
        std::vector<std::vector<std::pair<int, int>>> adj(n);
        for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
            adj[t.edges[e].first].push_back({t.edges[e].second, e});
            adj[t.edges[e].second].push_back({t.edges[e].first, e});
        }
        struct Step {
            int v;
            int kid[2];
            int kedge[2];
        };
        std::vector<Step> steps;
        std::function<void(int, int)> visit = [&](int v, int parent) {
            Step st{v, {-1, -1}, {-1, -1}};
            int nk = 0;
            for (auto [u, e] : adj[v]) {
                if (u == parent) continue;
                if (t.node_mark[u] == -1 && u >= t.n_ends) visit(u, v);
                st.kid[nk] = u;
                st.kedge[nk++] = e;
            }
            steps.push_back(st);
        };
        for (int leaf = 0; leaf < t.n_ends; ++leaf) {
            const int v = adj[leaf][0].first;
            if (t.node_mark[v] == -1) visit(v, leaf);
        }

        TreeType labelled = t;
        std::vector<RatVec2> pos(n);
        std::vector<Rational> len(t.edges.size());
        std::vector<char> used(deg_.points.size(), 0);
        auto out_dir = [&](int v, int e) { return t.edges[e].first == v ? w[e] : -w[e]; };

        std::function<void(std::size_t)> step = [&](std::size_t i) {
            if (i == steps.size()) {
                finish_labels(labelled, w, pos, len, used);
                return;
            }
            const Step& st = steps[i];
            // label any unlabelled slot among the children, then place the vertex
            for (int c = 0; c < 2; ++c) {
                const int u = st.kid[c];
                if (labelled.node_mark[u] != kSlot) continue;
                for (int p : light_) {
                    if (used[p]) continue;
                    used[p] = 1;
                    labelled.node_mark[u] = p;
                    pos[u] = deg_.points[p].pos;
                    step(i);
                    labelled.node_mark[u] = kSlot;
                    used[p] = 0;
                }
                return;
            }
            const Vec2 d1 = out_dir(st.v, st.kedge[0]), d2 = out_dir(st.v, st.kedge[1]);
            const RatVec2 diff = pos[st.kid[0]] - pos[st.kid[1]];
            const Rational det = static_cast<long>(wedge(d1, d2));
            // v + l1 d1 = c1 and v + l2 d2 = c2
            const Rational l1 = wedge(diff, d2) / det;
            const Rational l2 = wedge(diff, d1) / det;
            if (l1 < 0 || l2 < 0) return;
            // a zero length only matters if the branch completes to a curve
            const int z = (l1 == 0) + (l2 == 0);
            pos[st.v] = pos[st.kid[0]] - RatVec2(d1) * l1;
            len[st.kedge[0]] = l1;
            len[st.kedge[1]] = l2;
            contracted_ += z;
            step(i + 1);
            contracted_ -= z;
        };
        step(0);
    }

    // Slots not adjacent to any vertex carry no condition of their own.
    void finish_labels(TreeType& t, const std::vector<Vec2>& w, std::vector<RatVec2>& pos, std::vector<Rational>& len, std::vector<char>& used)
    {
        const int n = static_cast<int>(t.node_mark.size());
        for (int v = t.n_ends; v < n; ++v) {
            if (t.node_mark[v] != kSlot) continue;
            for (int p : light_) {
                if (used[p]) continue;
                used[p] = 1;
                t.node_mark[v] = p;
                pos[v] = deg_.points[p].pos;
                finish_labels(t, w, pos, len, used);
                t.node_mark[v] = kSlot;
                used[p] = 0;
            }
            return;
        }
        if (contracted_ > 0) throw PerturbRequired("perturb configuration: tropical curve with a contracted edge");
        emit(t, w, pos, len);
    }

    void emit(const TreeType& t, const std::vector<Vec2>& w, const std::vector<RatVec2>& pos, const std::vector<Rational>& len)
    {
        const int n = static_cast<int>(t.node_mark.size());
        TropicalCurve c;
        std::vector<int> vid(n, -1);
        for (int v = t.n_ends; v < n; ++v) {
            vid[v] = static_cast<int>(c.vertices.size());
            c.vertices.push_back({pos[v], t.node_mark[v], QCoeff(1)});
        }
        std::vector<std::vector<Vec2>> out(c.vertices.size());
        for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
            auto [a, b] = t.edges[e];
            if (a < t.n_ends) {
                c.edges.push_back({vid[b], -1, -w[e], 0, a});
                out[vid[b]].push_back(-w[e]);
            } else if (b < t.n_ends) {
                c.edges.push_back({vid[a], -1, w[e], 0, b});
                out[vid[a]].push_back(w[e]);
            } else {
                c.edges.push_back({vid[a], vid[b], w[e], len[e], -1});
                out[vid[a]].push_back(w[e]);
                out[vid[b]].push_back(-w[e]);
            }
        }
        c.multiplicity = 1;
        for (std::size_t v = 0; v < c.vertices.size(); ++v) {
            auto& vx = c.vertices[v];
            vx.mult = vx.marked >= 0 ? pointed_multiplicity(out[v]) : bg_multiplicity(out[v][0], out[v][1]);
            c.multiplicity *= vx.mult;
        }
        std::string sig = interchangeable_ ? c.signature() : std::to_string(out_.size());
        if (interchangeable_ && !seen_curves_.insert(sig).second) return;
        out_.emplace_back(interchangeable_ ? sig : std::string(), std::move(c));
    }

    static constexpr int kSlot = -2;
    int contracted_ = 0;

    TropicalDegree deg_;
    std::vector<int> heavy_, light_;
    bool pure_ = false;
    bool interchangeable_ = false;
    std::set<std::string> seen_types_, seen_curves_;
    std::vector<std::pair<std::string, TropicalCurve>> out_;
};

} // namespace detail

/// Rigid genus-0 curves of the given degree through the marked points.
inline std::vector<TropicalCurve> enumerate_rigid_curves(const TropicalDegree& deg)
{
    return detail::CurveEnumerator(deg).run();
}

inline QCoeff refined_count(const TropicalDegree& deg)
{
    QCoeff total;
    for (const auto& c : enumerate_rigid_curves(deg)) total += c.multiplicity;
    return total;
}

/// Classical count: |a^b| at trivalent vertices, pointed vertices at s = 1.
inline mpq_class classical_count(const TropicalDegree& deg)
{
    mpq_class total = 0;
    for (const auto& c : enumerate_rigid_curves(deg)) {
        std::vector<std::vector<Vec2>> out(c.vertices.size());
        for (const auto& e : c.edges) {
            out[e.a].push_back(e.weight);
            if (e.b >= 0) out[e.b].push_back(-e.weight);
        }
        mpq_class m = 1;
        for (std::size_t v = 0; v < c.vertices.size(); ++v) {
            if (c.vertices[v].marked >= 0) continue;
            const auto w = wedge(out[v][0], out[v][1]);
            m *= static_cast<long>(w < 0 ? -w : w);
        }
        total += m;
    }
    return total;
}

} // namespace qmirror
