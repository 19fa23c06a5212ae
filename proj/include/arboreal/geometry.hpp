/**
 * Plane geometry for the expansion pipeline.  Germ validation (pairwise
 * disjointness, radial monotonicity) runs exactly over the rationals of
 * the input polylines; the expansion scene itself (offsets, circles,
 * crossings) uses closed-form double evaluation with margins enforced by
 * the constants checker.
 */
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace arboreal {

using Rational = boost::multiprecision::cpp_rational;

struct RPoint {
    Rational x, y;
    bool operator==(const RPoint& o) const { return x == o.x && y == o.y; }
};

inline Rational cross(const RPoint& o, const RPoint& a, const RPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline Rational dot2(const RPoint& a, const RPoint& b) { return a.x * b.x + a.y * b.y; }

inline bool on_segment(const RPoint& p, const RPoint& a, const RPoint& b) {
    if (cross(a, b, p) != 0) return false;
    return dot2({p.x - a.x, p.y - a.y}, {p.x - b.x, p.y - b.y}) <= 0;
}

/// Do [a,b] and [c,d] share any point besides `allowed`?  Exact.
inline bool segments_share_point_besides(const RPoint& a, const RPoint& b, const RPoint& c,
                                         const RPoint& d, const RPoint& allowed) {
    Rational d1 = cross(c, d, a), d2 = cross(c, d, b);
    Rational d3 = cross(a, b, c), d4 = cross(a, b, d);

    auto bad = [&](const RPoint& p) { return !(p == allowed); };

    if (d1 == 0 && d2 == 0) {  // collinear: compare parameter intervals
        RPoint dir{b.x - a.x, b.y - a.y};
        if (dir.x == 0 && dir.y == 0) return on_segment(a, c, d) && bad(a);
        auto param = [&](const RPoint& p) { return dot2({p.x - a.x, p.y - a.y}, dir); };
        Rational lo1 = 0, hi1 = dot2(dir, dir);
        Rational lo2 = param(c), hi2 = param(d);
        if (lo2 > hi2) std::swap(lo2, hi2);
        Rational lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
        if (lo > hi) return false;
        if (lo < hi) return true;  // a whole shared subsegment
        // single shared point at parameter lo
        Rational den = dot2(dir, dir);
        RPoint p{a.x + dir.x * lo / den, a.y + dir.y * lo / den};
        return bad(p);
    }

    bool proper = ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) &&
                  d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
    if (proper) {
        Rational t = d3 / (d3 - d4);  // along [c,d]
        RPoint p{c.x + (d.x - c.x) * t, c.y + (d.y - c.y) * t};
        return bad(p);
    }
    // touching cases: an endpoint on the other segment
    for (const RPoint* p : {&a, &b})
        if (on_segment(*p, c, d) && bad(*p)) return true;
    for (const RPoint* p : {&c, &d})
        if (on_segment(*p, a, b) && bad(*p)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Double-precision scene geometry

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(const Vec2& a) {
    double n = norm(a);
    return {a.x / n, a.y / n};
}
inline Vec2 perp_left(const Vec2& a) { return {-a.y, a.x}; }
inline double angle_of(const Vec2& a) { return std::atan2(a.y, a.x); }

/// Unsigned angle between two directions in [0, pi].
inline double angle_between(const Vec2& a, const Vec2& b) {
    double c = dot(normalized(a), normalized(b));
    c = std::max(-1.0, std::min(1.0, c));
    return std::acos(c);
}

/// Intersections of segment p + t (q - p), t in [0,1], with the circle
/// |x| = r centered at the origin; returns the t values, ascending.
inline std::vector<double> segment_circle_params(const Vec2& p, const Vec2& q, double r) {
    Vec2 v = q - p;
    double a = dot(v, v);
    double b = 2.0 * dot(p, v);
    double c = dot(p, p) - r * r;
    std::vector<double> out;
    if (a == 0.0) return out;
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;
    double sq = std::sqrt(disc);
    for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
        if (t >= 0.0 && t <= 1.0 && (out.empty() || t > out.back())) out.push_back(t);
    return out;
}

/// Proper crossing of two segments; returns (t along [p1,q1], u along [p2,q2]).
inline std::optional<std::pair<double, double>> segment_segment_params(const Vec2& p1, const Vec2& q1,
                                                                       const Vec2& p2, const Vec2& q2) {
    Vec2 r = q1 - p1, s = q2 - p2;
    double denom = cross(r, s);
    if (denom == 0.0) return std::nullopt;
    Vec2 d = p2 - p1;
    double t = cross(d, s) / denom;
    double u = cross(d, r) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return std::make_pair(t, u);
}

struct Polyline {
    std::vector<Vec2> pts;

    double length() const {
        double s = 0.0;
        for (size_t i = 1; i < pts.size(); ++i) s += norm(pts[i] - pts[i - 1]);
        return s;
    }

    Vec2 point_at(int seg, double t) const {
        return pts[seg] + (pts[seg + 1] - pts[seg]) * t;
    }

    Vec2 direction_at(int seg) const { return normalized(pts[seg + 1] - pts[seg]); }
};

/// Offset of an open polyline to one side (positive = toward the given
/// per-segment normal, i.e. rotate the travel direction by +90 degrees
/// when `left` is true).  Miter joins; returns nullopt when a join
/// degenerates (near-reversal) or the offset self-intersects.
inline std::optional<Polyline> offset_polyline(const Polyline& base, bool left, double r) {
    const auto& p = base.pts;
    if (p.size() < 2) return std::nullopt;
    auto normal_of = [&](size_t seg) {
        Vec2 d = normalized(p[seg + 1] - p[seg]);
        Vec2 n = perp_left(d);
        return left ? n : Vec2{-n.x, -n.y};
    };
    Polyline out;
    out.pts.push_back(p[0] + normal_of(0) * r);
    for (size_t k = 1; k + 1 < p.size(); ++k) {
        // miter point: intersection of the two offset lines through p[k]
        Vec2 n0 = normal_of(k - 1), n1 = normal_of(k);
        Vec2 d0 = normalized(p[k] - p[k - 1]), d1 = normalized(p[k + 1] - p[k]);
        double denom = cross(d0, d1);
        if (std::abs(denom) < 1e-14) {  // straight continuation
            out.pts.push_back(p[k] + n0 * r);
            continue;
        }
        // solve p[k] + n0 r + t d0 = p[k] + n1 r + u d1
        Vec2 rhs = (n1 - n0) * r;
        double t = cross(rhs, d1) / denom;
        Vec2 m = p[k] + n0 * r + d0 * t;
        if (dot(d0, d1) < -0.5) return std::nullopt;  // near-reversal: miter blows up
        out.pts.push_back(m);
    }
    out.pts.push_back(p.back() + normal_of(p.size() - 2) * r);
    // self-intersection scan
    for (size_t i = 0; i + 1 < out.pts.size(); ++i)
        for (size_t j = i + 2; j + 1 < out.pts.size(); ++j) {
            auto hit = segment_segment_params(out.pts[i], out.pts[i + 1], out.pts[j], out.pts[j + 1]);
            if (hit) return std::nullopt;
        }
    return out;
}

inline double distance_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 v = b - a;
    double len2 = dot(v, v);
    double t = len2 == 0.0 ? 0.0 : std::max(0.0, std::min(1.0, dot(p - a, v) / len2));
    return norm(p - (a + v * t));
}

inline double distance_point_polyline(const Vec2& p, const Polyline& poly) {
    double best = 1e300;
    for (size_t i = 0; i + 1 < poly.pts.size(); ++i)
        best = std::min(best, distance_point_segment(p, poly.pts[i], poly.pts[i + 1]));
    return best;
}

/// Normalize an angle into [base, base + 2 pi).
inline double normalize_angle_from(double theta, double base) {
    const double two_pi = 2.0 * M_PI;
    double t = std::fmod(theta - base, two_pi);
    if (t < 0) t += two_pi;
    return base + t;
}

}  // namespace arboreal
