#include "okb/lattice.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "okb/errors.hpp"

namespace okb {

PointCloud::PointCloud(std::int64_t k_, std::vector<IPoint> pts) : k(k_), points(std::move(pts)) {
    if (k <= 0) throw DomainError("point cloud denominator must be positive");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
}

bool PointCloud::contains(const IPoint& z) const { return std::binary_search(points.begin(), points.end(), z); }

Point PointCloud::coords(std::size_t i) const {
    Point p;
    for (auto z : points[i]) p.push_back(make_rat(z, k));
    return p;
}

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}
Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

std::int64_t narrow(i128 x) { return static_cast<std::int64_t>(x); }
std::int64_t narrow(const Int& x) { return to_i64(x); }

template <class T>
T from_int(const Int& z);
template <>
i128 from_int<i128>(const Int& z) {
    return static_cast<i128>(to_i64(z));
}
template <>
Int from_int<Int>(const Int& z) {
    return z;
}

// Integer form of B ∩ Z^n/k: a . z <= b with a, b integers.
template <class T>
struct Scan {
    std::size_t n;
    std::vector<std::vector<T>> a;
    std::vector<T> b;
    std::vector<std::size_t> last_nz;
    std::vector<T> lo, hi;

    Scan(const ConvexBody& B, std::int64_t k) : n(B.dim()) {
        for (const auto& h : B.halfspaces()) {
            std::vector<T> row;
            std::size_t last = 0;
            for (std::size_t i = 0; i < n; ++i) {
                row.push_back(from_int<T>(h.normal[i].get_num()));
                if (h.normal[i] != 0) last = i;
            }
            a.push_back(std::move(row));
            b.push_back(from_int<T>(floor_of(h.offset * Rat(k))));
            last_nz.push_back(last);
        }
        for (std::size_t i = 0; i < n; ++i) {
            Rat mn = B.vertices().front()[i], mx = mn;
            for (const auto& v : B.vertices()) {
                if (v[i] < mn) mn = v[i];
                if (v[i] > mx) mx = v[i];
            }
            lo.push_back(from_int<T>(ceil_of(mn * Rat(k))));
            hi.push_back(from_int<T>(floor_of(mx * Rat(k))));
        }
    }

    // feasible interval of the last coordinate given the others
    bool last_range(const std::vector<T>& z, T& zlo, T& zhi) const {
        zlo = lo[n - 1];
        zhi = hi[n - 1];
        for (std::size_t h = 0; h < a.size(); ++h) {
            if (last_nz[h] != n - 1) continue;
            T rest = b[h];
            for (std::size_t i = 0; i + 1 < n; ++i) rest -= a[h][i] * z[i];
            const T& c = a[h][n - 1];
            if (c > 0) {
                T u = floor_div(rest, c);
                if (u < zhi) zhi = u;
            } else {
                T l = ceil_div(rest, c);
                if (l > zlo) zlo = l;
            }
        }
        return zlo <= zhi;
    }

    bool prefix_ok(const std::vector<T>& z, std::size_t depth) const {
        for (std::size_t h = 0; h < a.size(); ++h) {
            if (last_nz[h] != depth) continue;
            T s = 0;
            for (std::size_t i = 0; i <= depth; ++i) s += a[h][i] * z[i];
            if (s > b[h]) return false;
        }
        return true;
    }

    template <class Visit>
    void walk(std::vector<T>& z, std::size_t depth, const Visit& visit) const {
        if (depth == n - 1) {
            T zlo, zhi;
            if (last_range(z, zlo, zhi)) visit(z, zlo, zhi);
            return;
        }
        for (T x = lo[depth]; x <= hi[depth]; ++x) {
            z[depth] = x;
            if (prefix_ok(z, depth)) walk(z, depth + 1, visit);
        }
    }

    // walk restricted to leading coordinate in [from, to]
    template <class Visit>
    void walk_slab(T from, T to, const Visit& visit) const {
        std::vector<T> z(n, T(0));
        if (n == 1) {
            T zlo, zhi;
            if (last_range(z, zlo, zhi)) {
                if (zlo < from) zlo = from;
                if (zhi > to) zhi = to;
                if (zlo <= zhi) visit(z, zlo, zhi);
            }
            return;
        }
        for (T x = from; x <= to; ++x) {
            z[0] = x;
            if (prefix_ok(z, 0)) walk(z, 1, visit);
        }
    }
};

template <class T, class Job>
void run_slabs(const Scan<T>& s, unsigned jobs, std::vector<Job>& out, const auto& make) {
    T lo = s.lo[0], hi = s.hi[0];
    T span = hi - lo + 1;
    if (span <= 0) return;
    T parts = jobs == 0 ? T(1) : T(jobs);
    if (parts > span) parts = span;
    out.resize(narrow(parts));
    std::vector<std::thread> threads;
    for (T p = 0; p < parts; ++p) {
        T from = lo + span * p / parts;
        T to = lo + span * (p + 1) / parts - 1;
        Job* slot = &out[narrow(p)];
        if (parts == 1) {
            *slot = make(from, to);
        } else {
            threads.emplace_back([slot, from, to, &make] { *slot = make(from, to); });
        }
    }
    for (auto& t : threads) t.join();
}

bool fits_fast(const ConvexBody& B, std::int64_t k) {
    const Int limit = Int(1) << 40;
    for (const auto& h : B.halfspaces()) {
        for (const auto& a : h.normal)
            if (abs(a.get_num()) > limit) return false;
        if (abs(floor_of(h.offset * Rat(k))) > limit) return false;
    }
    for (const auto& v : B.vertices())
        for (const auto& x : v)
            if (abs(floor_of(x * Rat(k))) > limit) return false;
    return true;
}

template <class T>
PointCloud enumerate_impl(const ConvexBody& B, std::int64_t k, unsigned jobs) {
    Scan<T> s(B, k);
    std::vector<std::vector<IPoint>> parts;
    run_slabs(s, jobs, parts, [&](T from, T to) {
        std::vector<IPoint> pts;
        s.walk_slab(from, to, [&](const std::vector<T>& z, const T& zlo, const T& zhi) {
            IPoint p(z.size());
            for (std::size_t i = 0; i + 1 < z.size(); ++i) p[i] = narrow(z[i]);
            for (T x = zlo; x <= zhi; ++x) {
                p.back() = narrow(x);
                pts.push_back(p);
            }
        });
        return pts;
    });
    PointCloud pc;
    pc.k = k;
    for (auto& part : parts) pc.points.insert(pc.points.end(), part.begin(), part.end());
    return pc;
}

template <class T>
std::int64_t count_impl(const ConvexBody& B, std::int64_t k, unsigned jobs) {
    Scan<T> s(B, k);
    std::vector<std::int64_t> parts;
    run_slabs(s, jobs, parts, [&](T from, T to) {
        std::int64_t c = 0;
        s.walk_slab(from, to, [&](const std::vector<T>&, const T& zlo, const T& zhi) { c += narrow(zhi - zlo + 1); });
        return c;
    });
    std::int64_t total = 0;
    for (auto c : parts) total += c;
    return total;
}

}  // namespace

PointCloud enumerate(const ConvexBody& B, std::int64_t k, unsigned jobs) {
    if (k <= 0) throw DomainError("k must be positive");
    if (B.is_empty()) return PointCloud(k, {});
    return fits_fast(B, k) ? enumerate_impl<i128>(B, k, jobs) : enumerate_impl<Int>(B, k, jobs);
}

std::int64_t count(const ConvexBody& B, std::int64_t k, unsigned jobs) {
    if (k <= 0) throw DomainError("k must be positive");
    if (B.is_empty()) return 0;
    return fits_fast(B, k) ? count_impl<i128>(B, k, jobs) : count_impl<Int>(B, k, jobs);
}

Rat discrepancy(const ConvexBody& B, std::int64_t k) {
    return Rat(static_cast<long>(count(B, k))) - volume(B) * pow(Rat(static_cast<long>(k)), B.dim());
}

Rat concave_sum(const ConvexBody& B, const ConcavePL& G, std::int64_t k) {
    PointCloud pc = enumerate(B, k);
    Rat total = 0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        Rat g = G(pc.coords(i));
        if (g < 0) throw DomainError("concave function negative at " + to_string(pc.coords(i)));
        total += g;
    }
    return total / pow(Rat(static_cast<long>(k)), B.dim());
}

Rat lower_bound_constant_ub(std::size_t n, const Rat& r) {
    Rat n3 = pow(Rat(static_cast<long>(n)), 3);
    return sqrt_upper(n3) / (2 * r);
}

ShiftedMinCount shifted_min_count(const ConvexBody& B, std::int64_t ell, const ShiftStrategy& strategy) {
    if (ell <= 0) throw DomainError("ell must be positive");
    ShiftedMinCount out;
    const std::size_t n = B.dim();
    Rat vol = B.full_dimensional() ? volume(B) : Rat(0);
    if (vol == 0) {
        out.analytic_lb = 0;
        out.constant_ub = 0;
    } else {
        out.constant_ub = lower_bound_constant_ub(n, chebyshev_ball(B).radius_lb);
        Rat L(static_cast<long>(ell));
        Rat bound = (1 - out.constant_ub / L) * vol * pow(L, n);
        out.analytic_lb = bound > 0 ? ceil_of(bound) : Int(0);
    }
    if (strategy.kind == ShiftStrategy::Kind::Sample && !B.is_empty()) {
        std::mt19937_64 rng(strategy.seed);
        const long den = 1L << 20;
        std::int64_t best = -1;
        for (std::size_t s = 0; s < strategy.samples; ++s) {
            Point shift(n);
            for (auto& x : shift) x = make_rat(static_cast<long>(rng() % (den + 1)), den) - Rat(1, 2);
            std::int64_t c = count(scale_translate(B, 1, shift), ell);
            if (best < 0 || c < best) best = c;
        }
        if (best >= 0) out.sampled_min = best;
    }
    return out;
}

}  // namespace okb
