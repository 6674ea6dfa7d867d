#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "okb/rational.hpp"

namespace okb {

using Point = Vec;

// {x : normal . x <= offset}
struct HalfSpace {
    Vec normal;
    Rat offset;

    Rat slack(const Point& x) const { return offset - dot(normal, x); }
    bool contains(const Point& x) const { return slack(x) >= 0; }
    bool operator==(const HalfSpace& o) const { return normal == o.normal && offset == o.offset; }
};

struct AffineFunctional {
    Vec gradient;
    Rat constant;

    Rat operator()(const Point& x) const { return dot(gradient, x) + constant; }
    std::size_t dim() const { return gradient.size(); }
    bool operator==(const AffineFunctional& o) const {
        return gradient == o.gradient && constant == o.constant;
    }

    // x -> x_i (0-based)
    static AffineFunctional coordinate(std::size_t n, std::size_t i);
    static AffineFunctional constant_fn(std::size_t n, const Rat& c);
};

// Pointwise minimum of affine pieces. Duplicate pieces are dropped on
// construction; piece order is otherwise preserved.
class ConcavePL {
public:
    ConcavePL() = default;
    explicit ConcavePL(std::vector<AffineFunctional> pieces);
    ConcavePL(AffineFunctional piece);  // NOLINT: single affine piece is a valid ConcavePL

    Rat operator()(const Point& x) const;
    const std::vector<AffineFunctional>& pieces() const { return pieces_; }
    std::size_t dim() const { return pieces_.front().dim(); }

private:
    std::vector<AffineFunctional> pieces_;
};

// A bounded convex polytope held in both representations. Vertices are
// sorted lexicographically; facets have primitive integer normals. The
// affine hull, when proper, is stored as equalities and also appears in
// halfspaces() as pairs of opposite inequalities.
class ConvexBody {
public:
    static ConvexBody empty(std::size_t dim);
    // Throws InputError on mixed dimensions or an empty list.
    static ConvexBody hull(const std::vector<Point>& points);
    // Intersection of halfspaces; may be empty. Throws DomainError if unbounded.
    static ConvexBody from_halfspaces(std::size_t dim, const std::vector<HalfSpace>& hs);

    static ConvexBody box(const Point& lo, const Point& hi);
    static ConvexBody unit_cube(std::size_t n) { return box(Point(n, Rat(0)), Point(n, Rat(1))); }
    // conv{0, s e_1, ..., s e_n}
    static ConvexBody simplex(std::size_t n, const Rat& scale = 1);
    static ConvexBody segment(const Rat& a, const Rat& b) { return box({a}, {b}); }

    std::size_t dim() const { return dim_; }
    bool is_empty() const { return vertices_.empty(); }
    std::size_t affine_dim() const { return affine_dim_; }
    bool full_dimensional() const { return !is_empty() && affine_dim_ == dim_; }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<HalfSpace>& facets() const { return facets_; }
    const std::vector<HalfSpace>& equalities() const { return equalities_; }
    std::vector<HalfSpace> halfspaces() const;
    // vertex indices tight on each facet
    const std::vector<std::vector<std::size_t>>& facet_vertices() const { return incidence_; }

    bool contains(const Point& x) const;
    bool operator==(const ConvexBody& o) const { return dim_ == o.dim_ && vertices_ == o.vertices_; }
    bool operator!=(const ConvexBody& o) const { return !(*this == o); }

private:
    std::size_t dim_ = 0;
    std::size_t affine_dim_ = 0;
    std::vector<Point> vertices_;
    std::vector<HalfSpace> facets_;
    std::vector<HalfSpace> equalities_;
    std::vector<std::vector<std::size_t>> incidence_;
};

inline ConvexBody hull(const std::vector<Point>& points) { return ConvexBody::hull(points); }

ConvexBody intersect_halfspace(const ConvexBody& B, const HalfSpace& h);
ConvexBody intersect(const ConvexBody& B, const std::vector<HalfSpace>& hs);

// Simplices (n+1 vertices each) of a fan triangulation from the vertex
// average; empty for lower-dimensional bodies.
std::vector<std::vector<Point>> triangulate(const ConvexBody& B);

Rat volume(const ConvexBody& B);
Point barycenter(const ConvexBody& B);
Rat simplex_volume(const std::vector<Point>& simplex);

ConvexBody superlevel(const ConvexBody& B, const ConcavePL& G, const Rat& t);

// (n-1)-volume of B ∩ {f = t} in the lattice-normalized volume of the
// hyperplane; for n = 1 the counting measure of the point slice.
Rat slice_volume(const ConvexBody& B, const AffineFunctional& f, const Rat& t);

ConvexBody minkowski_cube(const ConvexBody& B, const Rat& eps);

struct Ball {
    Point center;
    Rat radius_lb;
};
// bits: precision of the rational upper bounds on facet-normal norms
Ball chebyshev_ball(const ConvexBody& B, unsigned bits = 64);

ConvexBody slice_cone(const ConvexBody& B, const Rat& a, const Rat& b);
ConvexBody apex_cone(const ConvexBody& B, const Rat& a, const Rat& b, const Point& V);
ConvexBody rooftop(const ConvexBody& B, const AffineFunctional& f);
ConvexBody scale_translate(const ConvexBody& B, const Rat& lambda, const Point& shift);

// Range of an affine functional over a nonempty body.
std::pair<Rat, Rat> range_of(const ConvexBody& B, const AffineFunctional& f);

// max of a ConcavePL over a nonempty body (exact LP) and the attaining point.
std::pair<Rat, Point> maximize(const ConvexBody& B, const ConcavePL& G);
// min over a nonempty body; attained at a vertex.
Rat minimize(const ConvexBody& B, const ConcavePL& G);

// Exact integral of G over B, split along the linearity regions of G.
Rat integrate(const ConvexBody& B, const ConcavePL& G);

// The linearity cells B ∩ {piece_i <= piece_j for all j}; empty cells kept
// so that index i matches pieces()[i].
std::vector<ConvexBody> linearity_regions(const ConvexBody& B, const ConcavePL& G);

// G >= 0 on B (checked at the vertices).
bool nonnegative_on(const ConcavePL& G, const ConvexBody& B);

}  // namespace okb
