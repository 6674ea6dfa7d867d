#include "okb/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dd.hpp"
#include "linalg.hpp"
#include "okb/errors.hpp"

namespace okb {

using detail::affine_rank;
using detail::rank;

AffineFunctional AffineFunctional::coordinate(std::size_t n, std::size_t i) {
    AffineFunctional f{Vec(n, Rat(0)), Rat(0)};
    f.gradient.at(i) = 1;
    return f;
}

AffineFunctional AffineFunctional::constant_fn(std::size_t n, const Rat& c) {
    return AffineFunctional{Vec(n, Rat(0)), c};
}

ConcavePL::ConcavePL(std::vector<AffineFunctional> pieces) {
    if (pieces.empty()) throw InputError("ConcavePL needs at least one piece");
    const std::size_t n = pieces.front().dim();
    for (auto& p : pieces) {
        if (p.dim() != n) throw InputError("ConcavePL pieces of mixed dimension");
        bool dominated = false;
        for (auto& q : pieces_) {
            if (q.gradient == p.gradient) {
                if (p.constant < q.constant) q.constant = p.constant;
                dominated = true;
                break;
            }
        }
        if (!dominated) pieces_.push_back(std::move(p));
    }
}

ConcavePL::ConcavePL(AffineFunctional piece) : ConcavePL(std::vector<AffineFunctional>{std::move(piece)}) {}

Rat ConcavePL::operator()(const Point& x) const {
    Rat best = pieces_.front()(x);
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        Rat v = pieces_[i](x);
        if (v < best) best = v;
    }
    return best;
}

namespace {

IVec homogenize(const Vec& v, const Rat& last) {
    Vec w(v);
    w.push_back(last);
    return primitive(w);
}

Vec to_vec(const IVec& v, std::size_t from, std::size_t to) {
    Vec out;
    for (std::size_t i = from; i < to; ++i) out.emplace_back(v[i]);
    return out;
}

// (a, beta) scaled so that a is a primitive integer vector
HalfSpace normalize(const Vec& a, const Rat& beta) {
    IVec p = primitive(a);
    // primitive() scales by a positive factor; recover it from any nonzero entry
    std::size_t j = 0;
    while (a[j] == 0) ++j;
    Rat factor = Rat(p[j]) / a[j];
    HalfSpace h;
    for (const auto& x : p) h.normal.emplace_back(x);
    h.offset = beta * factor;
    return h;
}

bool halfspace_less(const HalfSpace& x, const HalfSpace& y) {
    if (x.normal != y.normal) return x.normal < y.normal;
    return x.offset < y.offset;
}

void check_dim(const Point& p, std::size_t n) {
    if (p.size() != n) throw InputError("point of dimension " + std::to_string(p.size()) + " in a body of dimension " + std::to_string(n));
}

}  // namespace

ConvexBody ConvexBody::empty(std::size_t dim) {
    ConvexBody B;
    B.dim_ = dim;
    return B;
}

ConvexBody ConvexBody::hull(const std::vector<Point>& input) {
    if (input.empty()) throw InputError("hull of an empty point list");
    const std::size_t n = input.front().size();
    if (n == 0) throw InputError("zero-dimensional ambient space");
    for (const auto& p : input) check_dim(p, n);

    std::vector<Point> pts(input);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<IVec> rows;
    rows.reserve(pts.size());
    for (const auto& p : pts) rows.push_back(homogenize(p, Rat(-1)));
    detail::ConeGenerators gen = detail::cone_generators(rows, n + 1);

    ConvexBody B;
    B.dim_ = n;

    std::vector<Vec> lin;
    for (const auto& l : gen.lineality) lin.push_back(to_vec(l, 0, n + 1));
    std::vector<std::size_t> pivots;
    lin = detail::rref(lin, &pivots);
    for (const auto& row : lin) {
        Vec a(row.begin(), row.begin() + n);
        B.equalities_.push_back(normalize(a, row[n]));
    }
    B.affine_dim_ = n - B.equalities_.size();

    for (const auto& r : gen.rays) {
        Vec w = to_vec(r, 0, n + 1);
        for (std::size_t i = 0; i < lin.size(); ++i) {
            if (w[pivots[i]] == 0) continue;
            Rat f = w[pivots[i]];
            for (std::size_t c = 0; c <= n; ++c) w[c] -= f * lin[i][c];
        }
        Vec a(w.begin(), w.begin() + n);
        bool zero = std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
        if (zero) continue;
        HalfSpace h = normalize(a, w[n]);
        bool tight = false;
        for (const auto& p : pts) {
            if (h.slack(p) == 0) {
                tight = true;
                break;
            }
        }
        if (tight) B.facets_.push_back(std::move(h));
    }
    std::sort(B.facets_.begin(), B.facets_.end(), halfspace_less);
    B.facets_.erase(std::unique(B.facets_.begin(), B.facets_.end()), B.facets_.end());

    std::vector<Vec> eq_normals;
    for (const auto& e : B.equalities_) eq_normals.push_back(e.normal);
    for (const auto& p : pts) {
        std::vector<Vec> tight = eq_normals;
        for (const auto& f : B.facets_)
            if (f.slack(p) == 0) tight.push_back(f.normal);
        if (rank(tight) == n) B.vertices_.push_back(p);
    }

    B.incidence_.resize(B.facets_.size());
    for (std::size_t f = 0; f < B.facets_.size(); ++f)
        for (std::size_t v = 0; v < B.vertices_.size(); ++v)
            if (B.facets_[f].slack(B.vertices_[v]) == 0) B.incidence_[f].push_back(v);
    return B;
}

ConvexBody ConvexBody::from_halfspaces(std::size_t dim, const std::vector<HalfSpace>& hs) {
    if (dim == 0) throw InputError("zero-dimensional ambient space");
    std::vector<IVec> rows;
    for (const auto& h : hs) {
        if (h.normal.size() != dim) throw InputError("halfspace dimension mismatch");
        bool zero = std::all_of(h.normal.begin(), h.normal.end(), [](const Rat& x) { return x == 0; });
        if (zero) {
            if (h.offset < 0) return empty(dim);
            continue;
        }
        rows.push_back(homogenize(h.normal, -h.offset));
    }
    IVec lam(dim + 1, Int(0));
    lam[dim] = -1;
    rows.push_back(lam);

    detail::ConeGenerators gen = detail::cone_generators(rows, dim + 1);
    std::vector<Point> verts;
    bool recession = !gen.lineality.empty();
    for (const auto& r : gen.rays) {
        if (r[dim] == 0) {
            recession = true;
            continue;
        }
        Point p;
        for (std::size_t i = 0; i < dim; ++i) p.push_back(Rat(r[i], r[dim]));
        for (auto& x : p) x.canonicalize();
        verts.push_back(std::move(p));
    }
    if (verts.empty()) return empty(dim);
    if (recession) throw DomainError("halfspace intersection is unbounded");
    return hull(verts);
}

ConvexBody ConvexBody::box(const Point& lo, const Point& hi) {
    if (lo.size() != hi.size() || lo.empty()) throw InputError("box corners of mismatched dimension");
    const std::size_t n = lo.size();
    std::vector<Point> pts;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        Point p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = (mask >> i & 1) ? hi[i] : lo[i];
        pts.push_back(std::move(p));
    }
    return hull(pts);
}

ConvexBody ConvexBody::simplex(std::size_t n, const Rat& scale) {
    std::vector<Point> pts(1, Point(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        Point p(n, Rat(0));
        p[i] = scale;
        pts.push_back(std::move(p));
    }
    return hull(pts);
}

std::vector<HalfSpace> ConvexBody::halfspaces() const {
    std::vector<HalfSpace> out = facets_;
    for (const auto& e : equalities_) {
        out.push_back(e);
        HalfSpace neg{e.normal, -e.offset};
        for (auto& x : neg.normal) x = -x;
        out.push_back(std::move(neg));
    }
    return out;
}

bool ConvexBody::contains(const Point& x) const {
    check_dim(x, dim_);
    if (is_empty()) return false;
    for (const auto& e : equalities_)
        if (e.slack(x) != 0) return false;
    for (const auto& f : facets_)
        if (f.slack(x) < 0) return false;
    return true;
}

ConvexBody intersect(const ConvexBody& B, const std::vector<HalfSpace>& hs) {
    if (B.is_empty()) return B;
    std::vector<HalfSpace> all = B.halfspaces();
    for (const auto& h : hs) {
        if (h.normal.size() != B.dim()) throw InputError("halfspace dimension mismatch");
        all.push_back(h);
    }
    return ConvexBody::from_halfspaces(B.dim(), all);
}

ConvexBody intersect_halfspace(const ConvexBody& B, const HalfSpace& h) { return intersect(B, {h}); }

namespace {

using Face = std::vector<std::size_t>;

std::vector<Face> triangulate_face(const ConvexBody& B, const Face& face, std::size_t d) {
    if (d == 0) return {Face{face.front()}};
    const std::size_t apex = face.front();
    std::set<Face> subfaces;
    for (const auto& inc : B.facet_vertices()) {
        Face t;
        std::set_intersection(face.begin(), face.end(), inc.begin(), inc.end(), std::back_inserter(t));
        if (t.size() < d || t.size() == face.size()) continue;
        if (std::binary_search(t.begin(), t.end(), apex)) continue;
        std::vector<Point> pts;
        for (auto i : t) pts.push_back(B.vertices()[i]);
        if (affine_rank(pts) != d - 1) continue;
        subfaces.insert(std::move(t));
    }
    std::vector<Face> out;
    for (const auto& sub : subfaces) {
        for (auto s : triangulate_face(B, sub, d - 1)) {
            s.push_back(apex);
            out.push_back(std::move(s));
        }
    }
    return out;
}

Rat factorial(std::size_t n) {
    Rat f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<long>(i);
    return f;
}

}  // namespace

std::vector<std::vector<Point>> triangulate(const ConvexBody& B) {
    std::vector<std::vector<Point>> out;
    if (!B.full_dimensional()) return out;
    const std::size_t n = B.dim();
    Point c(n, Rat(0));
    for (const auto& v : B.vertices())
        for (std::size_t i = 0; i < n; ++i) c[i] += v[i];
    for (auto& x : c) x /= static_cast<long>(B.vertices().size());
    for (const auto& inc : B.facet_vertices()) {
        for (const auto& s : triangulate_face(B, inc, n - 1)) {
            std::vector<Point> simplex{c};
            for (auto i : s) simplex.push_back(B.vertices()[i]);
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

Rat simplex_volume(const std::vector<Point>& s) {
    const std::size_t n = s.size() - 1;
    std::vector<Vec> m;
    for (std::size_t i = 1; i <= n; ++i) {
        Vec row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = s[i][j] - s[0][j];
        m.push_back(std::move(row));
    }
    return abs(detail::det(std::move(m))) / factorial(n);
}

Rat volume(const ConvexBody& B) {
    Rat v = 0;
    for (const auto& s : triangulate(B)) v += simplex_volume(s);
    return v;
}

Point barycenter(const ConvexBody& B) {
    const std::size_t n = B.dim();
    Rat total = 0;
    Point acc(n, Rat(0));
    for (const auto& s : triangulate(B)) {
        Rat v = simplex_volume(s);
        total += v;
        for (const auto& p : s)
            for (std::size_t i = 0; i < n; ++i) acc[i] += v * p[i];
    }
    if (total == 0) throw DomainError("barycenter of a degenerate body");
    for (auto& x : acc) x /= total * static_cast<long>(n + 1);
    return acc;
}

ConvexBody superlevel(const ConvexBody& B, const ConcavePL& G, const Rat& t) {
    std::vector<HalfSpace> hs;
    for (const auto& p : G.pieces()) {
        if (p.dim() != B.dim()) throw InputError("functional dimension mismatch");
        HalfSpace h{p.gradient, p.constant - t};
        for (auto& x : h.normal) x = -x;
        hs.push_back(std::move(h));
    }
    return intersect(B, hs);
}

namespace {

ConvexBody level_set(const ConvexBody& B, const AffineFunctional& f, const Rat& t) {
    HalfSpace up{f.gradient, t - f.constant};
    HalfSpace down{f.gradient, f.constant - t};
    for (auto& x : down.normal) x = -x;
    return intersect(B, {up, down});
}

}  // namespace

Rat slice_volume(const ConvexBody& B, const AffineFunctional& f, const Rat& t) {
    if (f.dim() != B.dim()) throw InputError("functional dimension mismatch");
    IVec a = primitive(f.gradient);
    std::size_t j = 0;
    while (j < a.size() && a[j] == 0) ++j;
    if (j == a.size()) throw DomainError("slice_volume needs a non-constant functional");
    ConvexBody S = level_set(B, f, t);
    if (S.is_empty()) return 0;
    if (B.dim() == 1) return 1;
    std::vector<Point> proj;
    for (const auto& v : S.vertices()) {
        Point p;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (i != j) p.push_back(v[i]);
        proj.push_back(std::move(p));
    }
    return volume(ConvexBody::hull(proj)) / Rat(abs(a[j]));
}

ConvexBody minkowski_cube(const ConvexBody& B, const Rat& eps) {
    if (eps < 0) throw DomainError("minkowski_cube needs eps >= 0");
    if (B.is_empty()) return B;
    const std::size_t n = B.dim();
    std::vector<Point> pts;
    for (const auto& v : B.vertices()) {
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            Point p = v;
            for (std::size_t i = 0; i < n; ++i) p[i] += (mask >> i & 1) ? eps : Rat(-eps);
            pts.push_back(std::move(p));
        }
    }
    return ConvexBody::hull(pts);
}

namespace {

Point vertex_average(const ConvexBody& B) {
    Point c(B.dim(), Rat(0));
    for (const auto& v : B.vertices())
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
    for (auto& x : c) x /= static_cast<long>(B.vertices().size());
    return c;
}

}  // namespace

Ball chebyshev_ball(const ConvexBody& B, unsigned bits) {
    if (!B.full_dimensional()) throw DomainError("chebyshev_ball of a degenerate body");
    const std::size_t n = B.dim();
    const Point c = vertex_average(B);
    // variables: y+ (n), y- (n), r ; x = c + y+ - y-
    std::vector<Vec> A;
    Vec b;
    for (const auto& f : B.facets()) {
        Vec row(2 * n + 1);
        Rat norm2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = f.normal[i];
            row[n + i] = -f.normal[i];
            norm2 += f.normal[i] * f.normal[i];
        }
        row[2 * n] = sqrt_upper(norm2, bits);
        A.push_back(std::move(row));
        b.push_back(f.slack(c));
    }
    Vec obj(2 * n + 1, Rat(0));
    obj[2 * n] = 1;
    detail::LpResult res = detail::lp_maximize(A, b, obj);
    Ball ball;
    ball.center = c;
    for (std::size_t i = 0; i < n; ++i) ball.center[i] += res.x[i] - res.x[n + i];
    ball.radius_lb = res.value;
    return ball;
}

std::pair<Rat, Rat> range_of(const ConvexBody& B, const AffineFunctional& f) {
    if (B.is_empty()) throw DomainError("range of a functional over an empty body");
    Rat lo = f(B.vertices().front()), hi = lo;
    for (const auto& v : B.vertices()) {
        Rat x = f(v);
        if (x < lo) lo = x;
        if (x > hi) hi = x;
    }
    return {lo, hi};
}

ConvexBody slice_cone(const ConvexBody& B, const Rat& a, const Rat& b) {
    if (!(a < b)) throw DomainError("slice_cone needs a < b");
    const auto p1 = AffineFunctional::coordinate(B.dim(), 0);
    auto [lo, hi] = range_of(B, p1);
    if (a < lo || b > hi) throw DomainError("slice_cone levels outside p1(B)");
    std::vector<Point> pts = level_set(B, p1, a).vertices();
    const ConvexBody top = level_set(B, p1, b);
    pts.insert(pts.end(), top.vertices().begin(), top.vertices().end());
    return ConvexBody::hull(pts);
}

ConvexBody apex_cone(const ConvexBody& B, const Rat& a, const Rat& b, const Point& V) {
    if (!(a < b)) throw DomainError("apex_cone needs a < b");
    check_dim(V, B.dim());
    if (!B.contains(V)) throw DomainError("apex not in body");
    if (V[0] != b) throw DomainError("apex does not lie on the level p1 = b");
    const auto p1 = AffineFunctional::coordinate(B.dim(), 0);
    auto [lo, hi] = range_of(B, p1);
    if (a < lo) throw DomainError("apex_cone level outside p1(B)");
    std::vector<Point> pts = level_set(B, p1, a).vertices();
    pts.push_back(V);
    return ConvexBody::hull(pts);
}

ConvexBody rooftop(const ConvexBody& B, const AffineFunctional& f) {
    if (f.dim() != B.dim()) throw InputError("functional dimension mismatch");
    if (B.is_empty()) return ConvexBody::empty(B.dim() + 1);
    for (const auto& v : B.vertices())
        if (f(v) < 0) throw DomainError("rooftop functional is negative on the body");
    const std::size_t n = B.dim();
    std::vector<HalfSpace> hs;
    for (const auto& h : B.halfspaces()) {
        HalfSpace l{h.normal, h.offset};
        l.normal.push_back(0);
        hs.push_back(std::move(l));
    }
    HalfSpace floor{Vec(n + 1, Rat(0)), 0};
    floor.normal[n] = -1;
    hs.push_back(floor);
    HalfSpace roof{f.gradient, f.constant};
    for (auto& x : roof.normal) x = -x;
    roof.normal.push_back(1);
    hs.push_back(roof);
    return ConvexBody::from_halfspaces(n + 1, hs);
}

ConvexBody scale_translate(const ConvexBody& B, const Rat& lambda, const Point& shift) {
    if (lambda <= 0) throw DomainError("scale_translate needs lambda > 0");
    check_dim(shift, B.dim());
    if (B.is_empty()) return B;
    std::vector<Point> pts;
    for (const auto& v : B.vertices()) {
        Point p(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) p[i] = lambda * v[i] + shift[i];
        pts.push_back(std::move(p));
    }
    return ConvexBody::hull(pts);
}

std::pair<Rat, Point> maximize(const ConvexBody& B, const ConcavePL& G) {
    if (B.is_empty()) throw DomainError("maximize over an empty body");
    if (G.dim() != B.dim()) throw InputError("functional dimension mismatch");
    if (G.pieces().size() == 1) {
        const auto& f = G.pieces().front();
        std::size_t best = 0;
        for (std::size_t i = 1; i < B.vertices().size(); ++i)
            if (f(B.vertices()[i]) > f(B.vertices()[best])) best = i;
        return {f(B.vertices()[best]), B.vertices()[best]};
    }
    const std::size_t n = B.dim();
    const Point c = vertex_average(B);
    const Rat base = G(c);
    // variables: y+ (n), y- (n), s >= 0 ; x = c + y+ - y-, value = base + s
    std::vector<Vec> A;
    Vec b;
    auto add_row = [&](const Vec& a, const Rat& s_coef, const Rat& rhs) {
        Vec row(2 * n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = a[i];
            row[n + i] = -a[i];
        }
        row[2 * n] = s_coef;
        A.push_back(std::move(row));
        b.push_back(rhs);
    };
    for (const auto& h : B.halfspaces()) add_row(h.normal, 0, h.slack(c));
    for (const auto& p : G.pieces()) {
        Vec neg = p.gradient;
        for (auto& x : neg) x = -x;
        add_row(neg, 1, p(c) - base);
    }
    Vec obj(2 * n + 1, Rat(0));
    obj[2 * n] = 1;
    detail::LpResult res = detail::lp_maximize(A, b, obj);
    Point x = c;
    for (std::size_t i = 0; i < n; ++i) x[i] += res.x[i] - res.x[n + i];
    return {base + res.value, x};
}

Rat minimize(const ConvexBody& B, const ConcavePL& G) {
    if (B.is_empty()) throw DomainError("minimize over an empty body");
    Rat best = G(B.vertices().front());
    for (const auto& v : B.vertices()) {
        Rat x = G(v);
        if (x < best) best = x;
    }
    return best;
}

std::vector<ConvexBody> linearity_regions(const ConvexBody& B, const ConcavePL& G) {
    const auto& ps = G.pieces();
    std::vector<ConvexBody> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<HalfSpace> hs;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            HalfSpace h;
            for (std::size_t c = 0; c < B.dim(); ++c) h.normal.push_back(ps[i].gradient[c] - ps[j].gradient[c]);
            h.offset = ps[j].constant - ps[i].constant;
            hs.push_back(std::move(h));
        }
        out.push_back(intersect(B, hs));
    }
    return out;
}

Rat integrate(const ConvexBody& B, const ConcavePL& G) {
    if (G.dim() != B.dim()) throw InputError("functional dimension mismatch");
    const auto regions = linearity_regions(B, G);
    Rat total = 0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& f = G.pieces()[i];
        for (const auto& s : triangulate(regions[i])) {
            Point centroid(B.dim(), Rat(0));
            for (const auto& p : s)
                for (std::size_t c = 0; c < B.dim(); ++c) centroid[c] += p[c];
            for (auto& x : centroid) x /= static_cast<long>(s.size());
            total += simplex_volume(s) * f(centroid);
        }
    }
    return total;
}

bool nonnegative_on(const ConcavePL& G, const ConvexBody& B) {
    if (B.is_empty()) return true;
    return minimize(B, G) >= 0;
}

}  // namespace okb
