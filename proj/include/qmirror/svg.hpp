#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "qmirror/broken_lines.hpp"
#include "qmirror/tropical.hpp"

namespace qmirror::svg {

struct Point {
    double x = 0;
    double y = 0;
};

inline Point to_point(const RatVec2& p) { return {p.x.get_d(), p.y.get_d()}; }

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v == 0 ? 0.0 : v);
    return buf;
}

struct Style {
    std::string stroke = "black";
    double width = 0.02;
    std::string dash;
    std::string layer = "walls";
};

class Canvas {
public:
    void include(Point p)
    {
        lo_.x = std::min(lo_.x, p.x);
        lo_.y = std::min(lo_.y, p.y);
        hi_.x = std::max(hi_.x, p.x);
        hi_.y = std::max(hi_.y, p.y);
    }

    void polyline(const std::vector<Point>& pts, const Style& st)
    {
        for (Point p : pts) include(p);
        std::ostringstream os;
        os << "<polyline fill=\"none\" stroke=\"" << st.stroke << "\" stroke-width=\"" << num(st.width) << '"';
        if (!st.dash.empty()) os << " stroke-dasharray=\"" << st.dash << '"';
        os << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << num(pts[i].x) << ',' << num(-pts[i].y);
        os << "\"/>";
        push(st.layer, os.str());
    }

    void dot(Point p, double r, const std::string& fill, const std::string& layer)
    {
        push(layer, "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(-p.y) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\"/>");
    }

    void label(Point p, const std::string& text, const std::string& layer)
    {
        push(layer, "<text x=\"" + num(p.x) + "\" y=\"" + num(-p.y) + "\" font-size=\"0.12\">" + escape(text) + "</text>");
    }

    /// Half-width of the fitted box, used to extend unbounded pieces past it.
    double reach() const
    {
        if (lo_.x > hi_.x) return 2;
        return std::max({hi_.x - lo_.x, hi_.y - lo_.y, 1.0}) + 2;
    }

    std::string str() const
    {
        Point lo = lo_, hi = hi_;
        if (lo.x > hi.x) lo = hi = {0, 0};
        const double pad = 0.25 * std::max({hi.x - lo.x, hi.y - lo.y, 1.0});
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(lo.x - pad) << ' ' << num(-hi.y - pad) << ' '
           << num(hi.x - lo.x + 2 * pad) << ' ' << num(hi.y - lo.y + 2 * pad) << "\">\n";
        for (const auto& [name, items] : layers_) {
            os << "<g id=\"" << name << "\">\n";
            for (const auto& s : items) os << s << '\n';
            os << "</g>\n";
        }
        os << "</svg>\n";
        return os.str();
    }

private:
    static std::string escape(const std::string& s)
    {
        std::string out;
        for (char c : s) {
            if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else if (c == '&') out += "&amp;";
            else out += c;
        }
        return out;
    }

    void push(const std::string& layer, std::string item)
    {
        auto it = std::find_if(layers_.begin(), layers_.end(), [&](const auto& l) { return l.first == layer; });
        if (it == layers_.end()) {
            layers_.emplace_back(layer, std::vector<std::string>{});
            it = std::prev(layers_.end());
        }
        it->second.push_back(std::move(item));
    }

    Point lo_{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Point hi_{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    std::vector<std::pair<std::string, std::vector<std::string>>> layers_;
};

inline Point along(Point p, Vec2 d, double t)
{
    const double len = std::hypot(static_cast<double>(d.x), static_cast<double>(d.y));
    return {p.x + t * d.x / len, p.y + t * d.y / len};
}

inline Style wall_style(const Wall& w)
{
    switch (w.provenance.kind) {
    case Provenance::Kind::Initial: return {"black", 0.03, "", "walls"};
    case Provenance::Kind::Factored: return {"#555555", 0.02, "0.08,0.04", "walls"};
    case Provenance::Kind::Added: break;
    }
    static const char* palette[] = {"#c0392b", "#2471a3", "#229954", "#b7950b", "#7d3c98"};
    return {palette[(w.provenance.order - 1 + 5) % 5], 0.025, "", "rays"};
}

inline void draw_diagram(Canvas& c, const ScatteringDiagram& d)
{
    for (const Wall& w : d.walls) c.include(to_point(w.base));
    const double R = c.reach();
    for (const Wall& w : d.walls) {
        const Point b = to_point(w.base);
        const Point from = w.kind == WallKind::Line ? along(b, w.direction, -R) : b;
        c.polyline({from, along(b, w.direction, R)}, wall_style(w));
    }
}

inline void draw_broken_lines(Canvas& c, const std::vector<BrokenLine>& lines)
{
    static const char* palette[] = {"#e67e22", "#16a085", "#8e44ad", "#2c3e50"};
    for (const auto& bl : lines) {
        c.include(to_point(bl.Q));
        for (const auto& s : bl.segments)
            if (s.start) c.include(to_point(*s.start));
    }
    const double R = c.reach();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& bl = lines[i];
        std::vector<Point> pts;
        const Point first = bl.segments.size() > 1 ? to_point(*bl.segments[1].start) : to_point(bl.Q);
        pts.push_back(along(first, bl.segments[0].exponent, R));
        for (std::size_t k = 1; k < bl.segments.size(); ++k) pts.push_back(to_point(*bl.segments[k].start));
        pts.push_back(to_point(bl.Q));
        c.polyline(pts, {palette[i % 4], 0.03, "", "broken_lines"});
        c.dot(to_point(bl.Q), 0.05, "black", "points");
    }
}

inline void draw_curve(Canvas& c, const TropicalCurve& curve, const TropicalDegree& deg)
{
    for (const auto& v : curve.vertices) c.include(to_point(v.pos));
    for (const auto& p : deg.points) c.include(to_point(p.pos));
    const double R = c.reach();
    for (const auto& e : curve.edges) {
        const Point a = to_point(curve.vertices[e.a].pos);
        const Point b = e.b >= 0 ? to_point(curve.vertices[e.b].pos) : along(a, e.weight, R);
        const Style st{e.b >= 0 ? "#1a5276" : "#5d6d7e", 0.02 * static_cast<double>(lattice_length(e.weight)), "", "curve"};
        c.polyline({a, b}, st);
    }
    for (const auto& v : curve.vertices) {
        c.dot(to_point(v.pos), 0.04, v.marked >= 0 ? "#c0392b" : "#1a5276", "vertices");
        c.label(to_point(v.pos), v.mult.str(), "labels");
    }
}

} // namespace qmirror::svg
