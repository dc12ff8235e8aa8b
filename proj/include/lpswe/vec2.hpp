#pragma once

#include <cmath>

namespace lpswe {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
    friend constexpr Vec2 operator/(Vec2 a, double s) noexcept { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) noexcept { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }

/// Rotation into the frame of unit normal n: (u.n, u.t) with t = (-n.y, n.x).
constexpr Vec2 to_normal_frame(const Vec2& u, const Vec2& n) noexcept {
    return {n.x * u.x + n.y * u.y, -n.y * u.x + n.x * u.y};
}

} // namespace lpswe
