#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace qmirror {

using Rational = mpq_class;

/// A vector of the character lattice M = Z^2.
struct Vec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr bool is_zero() const { return x == 0 && y == 0; }
    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(std::int64_t k) const { return {k * x, k * y}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr auto operator<=>(const Vec2&) const = default;
};

/// m1 ^ m2 = det[m1 m2].
constexpr std::int64_t wedge(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline std::int64_t lattice_length(Vec2 v)
{
    return std::gcd(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
}

inline Vec2 primitive(Vec2 v)
{
    const auto g = lattice_length(v);
    return g == 0 ? v : Vec2{v.x / g, v.y / g};
}

inline int sign(std::int64_t v) { return (v > 0) - (v < 0); }

inline std::ostream& operator<<(std::ostream& os, Vec2 v)
{
    return os << '(' << v.x << ',' << v.y << ')';
}

inline std::string to_string(Vec2 v) { return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")"; }

/// A point of M_R with exact rational coordinates.
struct RatVec2 {
    Rational x{0};
    Rational y{0};

    RatVec2() = default;
    RatVec2(Rational a, Rational b) : x(std::move(a)), y(std::move(b)) {}
    explicit RatVec2(Vec2 v) : x(static_cast<long>(v.x)), y(static_cast<long>(v.y)) {}

    RatVec2 operator+(const RatVec2& o) const { return {x + o.x, y + o.y}; }
    RatVec2 operator-(const RatVec2& o) const { return {x - o.x, y - o.y}; }
    RatVec2 operator*(const Rational& k) const { return {x * k, y * k}; }
    bool operator==(const RatVec2& o) const { return x == o.x && y == o.y; }
    bool operator<(const RatVec2& o) const { return x < o.x || (x == o.x && y < o.y); }
};

inline Rational wedge(const RatVec2& a, const RatVec2& b) { return a.x * b.y - a.y * b.x; }
inline Rational wedge(const RatVec2& a, Vec2 b) { return a.x * static_cast<long>(b.y) - a.y * static_cast<long>(b.x); }
inline Rational dot(const RatVec2& a, Vec2 b) { return a.x * static_cast<long>(b.x) + a.y * static_cast<long>(b.y); }
inline Rational norm2(const RatVec2& a) { return a.x * a.x + a.y * a.y; }

inline RatVec2 operator+(const RatVec2& p, Vec2 v) { return p + RatVec2(v); }

inline std::string to_string(const RatVec2& p) { return "(" + p.x.get_str() + "," + p.y.get_str() + ")"; }

inline std::ostream& operator<<(std::ostream& os, const RatVec2& p) { return os << to_string(p); }

/// Compares the angles of two nonzero vectors in [0, 2*pi).
inline bool angle_less(Vec2 a, Vec2 b)
{
    auto half = [](Vec2 v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; };
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return wedge(a, b) > 0;
}

} // namespace qmirror
