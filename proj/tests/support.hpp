#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "okb/geometry.hpp"

namespace okb::testing {

inline Rat R(const char* s) { return parse_rat(s); }
inline Rat R(long n, long d = 1) { return make_rat(n, d); }

inline Point P(std::initializer_list<Rat> xs) { return Point(xs); }

inline std::vector<Point> rational_points(std::initializer_list<std::initializer_list<const char*>> pts) {
    std::vector<Point> out;
    for (auto& p : pts) {
        Point q;
        for (auto* s : p) q.push_back(parse_rat(s));
        out.push_back(q);
    }
    return out;
}

inline ConvexBody unit_simplex(std::size_t n = 2) { return ConvexBody::simplex(n); }
inline ConvexBody unit_square() { return ConvexBody::unit_cube(2); }

// uniform integer in [0, n) straight from the engine bits so that draws do
// not depend on the standard library's distribution implementations
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline Rat random_rat(std::mt19937_64& rng, long den) {
    return make_rat(static_cast<long>(draw(rng, den + 1)), den);
}

// hull of random points in [0,1]^n with coordinates in Z/den, retried
// until full-dimensional
inline ConvexBody random_polytope(std::mt19937_64& rng, std::size_t n, std::size_t npts, long den) {
    for (;;) {
        std::vector<Point> pts;
        for (std::size_t i = 0; i < npts; ++i) {
            Point p;
            for (std::size_t j = 0; j < n; ++j) p.push_back(random_rat(rng, den));
            pts.push_back(p);
        }
        ConvexBody B = ConvexBody::hull(pts);
        if (B.full_dimensional()) return B;
    }
}

// polygon vertices in counterclockwise order (angle sort is only used for
// ordering, the area itself is exact)
inline std::vector<Point> ccw(std::vector<Point> v) {
    double cx = 0, cy = 0;
    for (auto& p : v) {
        cx += p[0].get_d();
        cy += p[1].get_d();
    }
    cx /= v.size();
    cy /= v.size();
    std::sort(v.begin(), v.end(), [&](const Point& a, const Point& b) {
        return std::atan2(a[1].get_d() - cy, a[0].get_d() - cx) < std::atan2(b[1].get_d() - cy, b[0].get_d() - cx);
    });
    return v;
}

inline Rat shoelace_area(const std::vector<Point>& verts) {
    auto v = ccw(verts);
    Rat s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return abs(s) / 2;
}

inline Point shoelace_centroid(const std::vector<Point>& verts) {
    auto v = ccw(verts);
    Rat a2 = 0, cx = 0, cy = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        Rat cr = p[0] * q[1] - q[0] * p[1];
        a2 += cr;
        cx += (p[0] + q[0]) * cr;
        cy += (p[1] + q[1]) * cr;
    }
    return {cx / (3 * a2), cy / (3 * a2)};
}

}  // namespace okb::testing
