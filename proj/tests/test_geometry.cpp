#include <gtest/gtest.h>

#include <random>

#include "okb/errors.hpp"
#include "okb/geometry.hpp"
#include "support.hpp"

using namespace okb;
using namespace okb::testing;

namespace {

const AffineFunctional p1_2d = AffineFunctional::coordinate(2, 0);

ConvexBody tail_triangle() { return hull(rational_points({{"1/2", "0"}, {"1", "0"}, {"1/2", "1/2"}})); }

ConvexBody lifted_hypograph(const ConvexBody& B, const ConcavePL& G) {
    // {(x,t) : x in B, 0 <= t <= G(x)} assembled directly from halfspaces
    const std::size_t n = B.dim();
    std::vector<HalfSpace> hs;
    for (auto h : B.halfspaces()) {
        h.normal.push_back(0);
        hs.push_back(h);
    }
    HalfSpace floor{Vec(n + 1, Rat(0)), 0};
    floor.normal[n] = -1;
    hs.push_back(floor);
    for (const auto& p : G.pieces()) {
        HalfSpace h;
        for (const auto& g : p.gradient) h.normal.push_back(-g);
        h.normal.push_back(1);
        h.offset = p.constant;
        hs.push_back(h);
    }
    return ConvexBody::from_halfspaces(n + 1, hs);
}

// weights of the interpolatory rule on n equally spaced nodes of [0,1]
std::vector<Rat> closed_rule(std::size_t nodes) {
    if (nodes == 1) return {Rat(1)};
    std::vector<std::vector<Rat>> m(nodes, std::vector<Rat>(nodes + 1));
    for (std::size_t j = 0; j < nodes; ++j) {
        for (std::size_t i = 0; i < nodes; ++i) m[j][i] = pow(R(i, nodes - 1), j);
        m[j][nodes] = R(1, j + 1);
    }
    for (std::size_t c = 0; c < nodes; ++c) {
        std::size_t p = c;
        while (m[p][c] == 0) ++p;
        std::swap(m[p], m[c]);
        for (std::size_t r = 0; r < nodes; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rat f = m[r][c] / m[c][c];
            for (std::size_t k = c; k <= nodes; ++k) m[r][k] -= f * m[c][k];
        }
    }
    std::vector<Rat> w(nodes);
    for (std::size_t i = 0; i < nodes; ++i) w[i] = m[i][nodes] / m[i][i];
    return w;
}

std::vector<Rat> p1_breakpoints(const ConvexBody& B) {
    std::vector<Rat> t;
    for (const auto& v : B.vertices()) t.push_back(v[0]);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

}  // namespace

TEST(Hull, SimplexHasThreeVerticesAndFacets) {
    auto B = hull(rational_points({{"0", "0"}, {"1", "0"}, {"0", "1"}}));
    EXPECT_EQ(B.vertices().size(), 3u);
    EXPECT_EQ(B.halfspaces().size(), 3u);
    EXPECT_EQ(B, unit_simplex());
}

TEST(Hull, InteriorPointDropped) {
    auto B = hull(rational_points({{"0", "0"}, {"1", "0"}, {"0", "1"}, {"1/4", "1/4"}}));
    EXPECT_EQ(B, unit_simplex());
    EXPECT_EQ(B.vertices().size(), 3u);
}

// (3,2) lies on the edge from (3/2,3) to (9/2,1), so the hull is a hexagon
TEST(Hull, FigureHexagon) {
    auto pts = rational_points({{"0", "2"}, {"3/2", "3"}, {"3", "2"}, {"9/2", "1"}, {"4", "1/2"}, {"1", "1/2"}, {"0", "1"}});
    auto B = hull(pts);
    EXPECT_EQ(B.vertices().size(), 6u);
    EXPECT_EQ(B.facets().size(), 6u);
    EXPECT_FALSE(std::count(B.vertices().begin(), B.vertices().end(), P({3, 2})));
    EXPECT_EQ(volume(B), shoelace_area(pts));
    EXPECT_EQ(barycenter(B), shoelace_centroid(pts));
}

TEST(Hull, MixedDimensionRejected) {
    std::vector<Point> pts{P({0, 0}), P({1})};
    EXPECT_THROW(hull(pts), InputError);
    EXPECT_THROW(hull({}), InputError);
}

TEST(Hull, LowerDimensionalBodies) {
    auto seg = hull(rational_points({{"0", "0"}, {"1", "1"}, {"1/2", "1/2"}}));
    EXPECT_EQ(seg.affine_dim(), 1u);
    EXPECT_EQ(seg.vertices().size(), 2u);
    EXPECT_EQ(seg.equalities().size(), 1u);
    EXPECT_EQ(volume(seg), 0);
    EXPECT_TRUE(seg.contains(P({R(1, 3), R(1, 3)})));
    EXPECT_FALSE(seg.contains(P({R(1, 3), R(1, 2)})));

    auto pt = hull({P({1, 2, 3})});
    EXPECT_EQ(pt.affine_dim(), 0u);
    EXPECT_EQ(pt.vertices().size(), 1u);
    EXPECT_TRUE(pt.facets().empty());
}

TEST(Intersect, SquareHalf) {
    auto B = intersect_halfspace(unit_square(), HalfSpace{{1, 0}, R(1, 2)});
    EXPECT_EQ(B, ConvexBody::box({0, 0}, {R(1, 2), 1}));
}

TEST(Intersect, SimplexUpperPart) {
    auto B = intersect_halfspace(unit_simplex(), HalfSpace{{-1, 0}, R(-1, 2)});
    EXPECT_EQ(B, tail_triangle());
}

TEST(Intersect, InfeasibleIsEmpty) {
    auto B = intersect_halfspace(unit_simplex(), HalfSpace{{-1, 0}, -2});
    EXPECT_TRUE(B.is_empty());
    EXPECT_EQ(volume(B), 0);
}

TEST(Intersect, UnboundedRejected) {
    EXPECT_THROW(ConvexBody::from_halfspaces(2, {HalfSpace{{1, 0}, 1}}), DomainError);
}

TEST(Volume, Examples) {
    EXPECT_EQ(volume(unit_simplex()), R(1, 2));
    EXPECT_EQ(volume(unit_square()), 1);
    EXPECT_EQ(volume(tail_triangle()), shoelace_area(tail_triangle().vertices()));
    EXPECT_EQ(volume(tail_triangle()), R(1, 8));
    EXPECT_EQ(volume(ConvexBody::simplex(3)), R(1, 6));
    EXPECT_EQ(volume(ConvexBody::simplex(4, 2)), R(16, 24));
}

TEST(Barycenter, Examples) {
    EXPECT_EQ(barycenter(unit_simplex()), P({R(1, 3), R(1, 3)}));
    EXPECT_EQ(barycenter(unit_square()), P({R(1, 2), R(1, 2)}));
    EXPECT_EQ(barycenter(tail_triangle()), P({R(2, 3), R(1, 6)}));
    EXPECT_EQ(barycenter(ConvexBody::simplex(3)), P({R(1, 4), R(1, 4), R(1, 4)}));
    EXPECT_THROW(barycenter(hull({P({0, 0}), P({1, 1})})), DomainError);
}

TEST(Superlevel, Examples) {
    ConcavePL G(p1_2d);
    EXPECT_EQ(superlevel(unit_simplex(), G, R(1, 2)), tail_triangle());
    EXPECT_EQ(superlevel(unit_simplex(), G, 0), unit_simplex());
    auto top = superlevel(unit_simplex(), G, 1);
    ASSERT_EQ(top.vertices().size(), 1u);
    EXPECT_EQ(top.vertices()[0], P({1, 0}));
    EXPECT_EQ(volume(top), 0);
}

TEST(SliceVolume, Examples) {
    EXPECT_EQ(slice_volume(unit_simplex(), p1_2d, R(1, 2)), R(1, 2));
    EXPECT_EQ(slice_volume(unit_square(), p1_2d, R(1, 2)), 1);
    EXPECT_EQ(slice_volume(unit_simplex(), p1_2d, 2), 0);
    // diagonal slice x+y = 1 of the square: one lattice step of the line
    AffineFunctional diag{{1, 1}, 0};
    EXPECT_EQ(slice_volume(unit_square(), diag, 1), 1);
    EXPECT_EQ(slice_volume(ConvexBody::simplex(3), AffineFunctional::coordinate(3, 0), R(1, 2)), R(1, 8));
}

TEST(MinkowskiCube, Examples) {
    EXPECT_EQ(minkowski_cube(unit_square(), R(1, 2)), ConvexBody::box({R(-1, 2), R(-1, 2)}, {R(3, 2), R(3, 2)}));
    auto cube = minkowski_cube(hull({P({0, 0, 0})}), R(1, 2));
    EXPECT_EQ(cube, ConvexBody::box(Point(3, R(-1, 2)), Point(3, R(1, 2))));
    auto fat = minkowski_cube(unit_simplex(), R(1, 4));
    EXPECT_EQ(fat.vertices().size(), 5u);
    EXPECT_EQ(volume(fat), shoelace_area(fat.vertices()));
    EXPECT_EQ(volume(fat), R(7, 4));
    EXPECT_GE(volume(fat), R(1, 2));
}

TEST(Chebyshev, Square) {
    auto ball = chebyshev_ball(unit_square());
    EXPECT_EQ(ball.center, P({R(1, 2), R(1, 2)}));
    EXPECT_EQ(ball.radius_lb, R(1, 2));
}

TEST(Chebyshev, Segment) {
    auto ball = chebyshev_ball(ConvexBody::segment(0, 1));
    EXPECT_EQ(ball.center, P({R(1, 2)}));
    EXPECT_EQ(ball.radius_lb, R(1, 2));
}

TEST(Chebyshev, SimplexBracketsIncircle) {
    auto ball = chebyshev_ball(unit_simplex());
    EXPECT_GE(ball.radius_lb, R("29/100"));
    // r <= (2 - sqrt 2)/2  <=>  (1 - r)^2 >= 1/2
    EXPECT_GE((1 - ball.radius_lb) * (1 - ball.radius_lb), R(1, 2));
    EXPECT_LE(ball.radius_lb, R("2929/10000"));
}

TEST(Chebyshev, DegenerateRejected) { EXPECT_THROW(chebyshev_ball(hull({P({0, 0}), P({1, 0})})), DomainError); }

TEST(SliceCone, Examples) {
    EXPECT_EQ(slice_cone(unit_square(), 0, 1), unit_square());
    EXPECT_EQ(slice_cone(unit_simplex(), 0, 1), unit_simplex());
    EXPECT_EQ(slice_cone(unit_square(), R(1, 4), R(3, 4)), ConvexBody::box({R(1, 4), 0}, {R(3, 4), 1}));
    EXPECT_THROW(slice_cone(unit_square(), 1, 1), DomainError);
    EXPECT_THROW(slice_cone(unit_square(), 0, 2), DomainError);
}

TEST(ApexCone, Examples) {
    EXPECT_EQ(apex_cone(unit_simplex(), 0, 1, P({1, 0})), unit_simplex());
    auto C = apex_cone(unit_square(), 0, 1, P({1, 0}));
    EXPECT_EQ(C, unit_simplex());
    EXPECT_EQ(superlevel(C, ConcavePL(p1_2d), R(1, 2)), tail_triangle());
    EXPECT_THROW(apex_cone(unit_square(), 0, 1, P({2, 0})), DomainError);
    EXPECT_THROW(apex_cone(unit_square(), 0, 1, P({R(1, 2), 0})), DomainError);
}

TEST(Rooftop, Examples) {
    EXPECT_EQ(volume(rooftop(unit_simplex(), p1_2d)), R(1, 6));
    auto tri = rooftop(ConvexBody::segment(0, 1), AffineFunctional::coordinate(1, 0));
    EXPECT_EQ(tri.dim(), 2u);
    EXPECT_EQ(volume(tri), R(1, 2));
    EXPECT_EQ(volume(rooftop(unit_square(), p1_2d)), R(1, 2));
    EXPECT_THROW(rooftop(unit_square(), AffineFunctional{{1, 0}, -1}), DomainError);
}

TEST(ScaleTranslate, Examples) {
    EXPECT_EQ(scale_translate(unit_square(), 2, {0, 0}), ConvexBody::box({0, 0}, {2, 2}));
    EXPECT_EQ(scale_translate(tail_triangle(), 2, {0, 0}), scale_translate(unit_simplex(), 1, {1, 0}));
    EXPECT_EQ(scale_translate(tail_triangle(), 1, {0, 0}), tail_triangle());
    EXPECT_THROW(scale_translate(unit_square(), 0, {0, 0}), DomainError);
}

TEST(ConcavePLTest, MaximizeAndIntegrate) {
    // tent on the square, max 1/2 along the diagonal x = y
    ConcavePL tent({AffineFunctional{{1, 0}, 0}, AffineFunctional{{0, 1}, 0}});
    auto [mx, arg] = maximize(unit_square(), tent);
    EXPECT_EQ(mx, 1);
    EXPECT_EQ(tent(arg), 1);
    EXPECT_EQ(minimize(unit_square(), tent), 0);
    EXPECT_EQ(integrate(unit_square(), tent), R(1, 3));
    EXPECT_EQ(integrate(unit_square(), tent), volume(lifted_hypograph(unit_square(), tent)));
    ConcavePL roof({AffineFunctional{{1, 0}, 0}, AffineFunctional{{-1, 0}, 1}});
    EXPECT_EQ(maximize(unit_square(), roof).first, R(1, 2));
}

// ---- properties over seeded random rational polytopes ----

class RandomBodies : public ::testing::TestWithParam<std::size_t> {
protected:
    std::vector<ConvexBody> bodies() const {
        std::mt19937_64 rng(1234 + GetParam());
        std::vector<ConvexBody> out;
        for (int i = 0; i < 12; ++i) out.push_back(random_polytope(rng, GetParam(), 4 + i % 6, 7));
        return out;
    }
};

TEST_P(RandomBodies, RepresentationSync) {
    for (const auto& B : bodies()) {
        const auto hs = B.halfspaces();
        for (const auto& v : B.vertices()) {
            std::size_t tight = 0;
            for (const auto& h : hs) {
                EXPECT_GE(h.slack(v), 0);
                if (h.slack(v) == 0) ++tight;
            }
            EXPECT_GE(tight, B.dim());
        }
        for (const auto& f : B.facets()) {
            bool touched = false;
            for (const auto& v : B.vertices()) touched = touched || f.slack(v) == 0;
            EXPECT_TRUE(touched);
        }
        EXPECT_EQ(ConvexBody::from_halfspaces(B.dim(), hs), B);
    }
}

TEST_P(RandomBodies, VolumeScalesAsPower) {
    for (const auto& B : bodies()) {
        Rat lam = R(5, 3);
        EXPECT_EQ(volume(scale_translate(B, lam, Point(B.dim(), R(1, 7)))), pow(lam, B.dim()) * volume(B));
    }
}

TEST_P(RandomBodies, VolumeIsIntegralOfSlices) {
    const std::size_t n = GetParam();
    const auto f = AffineFunctional::coordinate(n, 0);
    const auto w = closed_rule(n);
    for (const auto& B : bodies()) {
        auto t = p1_breakpoints(B);
        Rat total = 0;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            Rat h = t[i + 1] - t[i];
            for (std::size_t j = 0; j < w.size(); ++j) {
                Rat s = w.size() == 1 ? Rat(t[i] + h / 2) : Rat(t[i] + h * R(j, w.size() - 1));
                total += h * w[j] * slice_volume(B, f, s);
            }
        }
        EXPECT_EQ(total, volume(B));
    }
}

TEST_P(RandomBodies, BrunnConcavity) {
    const std::size_t n = GetParam();
    const auto f = AffineFunctional::coordinate(n, 0);
    for (const auto& B : bodies()) {
        auto bp = p1_breakpoints(B);
        std::vector<Rat> grid;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            for (int j = 0; j < 4; ++j) grid.push_back(bp[i] + (bp[i + 1] - bp[i]) * R(j, 4));
        grid.push_back(bp.back());
        for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
            Rat a = slice_volume(B, f, grid[i]);
            Rat b = slice_volume(B, f, grid[i + 2]);
            Rat m = slice_volume(B, f, (grid[i] + grid[i + 2]) / 2);
            if (n == 2) {
                EXPECT_GE(2 * m, a + b);
            } else {
                // sqrt(m) >= (sqrt(a) + sqrt(b))/2
                Rat lhs = 4 * m - a - b;
                EXPECT_GE(lhs, 0);
                EXPECT_GE(lhs * lhs, 4 * a * b);
            }
        }
    }
}

TEST_P(RandomBodies, SuperlevelNesting) {
    const std::size_t n = GetParam();
    ConcavePL G({AffineFunctional::coordinate(n, 0), AffineFunctional{Vec(n, R(-1, 2)), 1}});
    for (const auto& B : bodies()) {
        if (!nonnegative_on(G, B)) continue;
        Rat top = maximize(B, G).first;
        ConvexBody prev = superlevel(B, G, 0);
        EXPECT_EQ(prev, B);
        for (int j = 1; j <= 5; ++j) {
            ConvexBody cur = superlevel(B, G, top * R(j, 5));
            for (const auto& v : cur.vertices()) EXPECT_TRUE(prev.contains(v));
            prev = cur;
        }
    }
}

TEST_P(RandomBodies, ChebyshevCertificate) {
    for (const auto& B : bodies()) {
        auto ball = chebyshev_ball(B);
        const Rat& r = ball.radius_lb;
        EXPECT_GT(r, 0);
        for (std::size_t i = 0; i < B.dim(); ++i) {
            for (int s : {-1, 1}) {
                Point p = ball.center;
                p[i] += s * r;
                EXPECT_TRUE(B.contains(p));
            }
        }
        for (const auto& f : B.facets()) {
            Rat slack = f.slack(ball.center);
            EXPECT_GE(slack, 0);
            EXPECT_GE(slack * slack, r * r * dot(f.normal, f.normal));
        }
    }
}

TEST_P(RandomBodies, ApexConeSimilarity) {
    const std::size_t n = GetParam();
    const auto f = AffineFunctional::coordinate(n, 0);
    std::mt19937_64 rng(99 + n);
    for (const auto& B : bodies()) {
        auto [lo, hi] = range_of(B, f);
        Point V;
        for (const auto& v : B.vertices())
            if (v[0] == hi) V = v;
        Rat a = lo + (hi - lo) * R(1 + draw(rng, 3), 5);
        ConvexBody C = apex_cone(B, a, hi, V);
        for (int j = 1; j <= 3; ++j) {
            Rat t = a + (hi - a) * R(j, 4);
            Point shift = V;
            for (auto& x : shift) x *= (t - a) / (hi - t);
            EXPECT_EQ(scale_translate(superlevel(C, ConcavePL(f), t), (hi - a) / (hi - t), Point(n, Rat(0))),
                      scale_translate(C, 1, shift));
        }
    }
}

TEST_P(RandomBodies, IntegrateMatchesHypographVolume) {
    const std::size_t n = GetParam();
    ConcavePL G({AffineFunctional::coordinate(n, 0), AffineFunctional{Vec(n, R(-1, 3)), R(2, 3)}});
    for (const auto& B : bodies()) {
        if (!nonnegative_on(G, B)) continue;
        auto hyp = lifted_hypograph(B, G);
        EXPECT_EQ(integrate(B, G), volume(hyp));
        Rat top = hyp.vertices().front()[n];
        for (const auto& v : hyp.vertices())
            if (v[n] > top) top = v[n];
        EXPECT_EQ(maximize(B, G).first, top);
    }
}

TEST_P(RandomBodies, BarycenterFirstMomentViaRooftop) {
    const std::size_t n = GetParam();
    const auto f = AffineFunctional::coordinate(n, 0);
    for (const auto& B : bodies()) EXPECT_EQ(volume(rooftop(B, f)), volume(B) * barycenter(B)[0]);
}

INSTANTIATE_TEST_SUITE_P(Dims, RandomBodies, ::testing::Values(2u, 3u));
