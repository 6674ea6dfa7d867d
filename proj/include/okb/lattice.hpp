#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "okb/geometry.hpp"

namespace okb {

using IPoint = std::vector<std::int64_t>;

// Points z/k for integer vectors z, kept sorted and unique.
struct PointCloud {
    std::int64_t k = 1;
    std::vector<IPoint> points;

    PointCloud() = default;
    PointCloud(std::int64_t k, std::vector<IPoint> pts);  // sorts and dedups

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool contains(const IPoint& z) const;
    Point coords(std::size_t i) const;
    bool operator==(const PointCloud& o) const { return k == o.k && points == o.points; }
};

// B ∩ Z^n/k in lexicographic order. jobs > 1 splits the leading coordinate
// into contiguous slabs; the result does not depend on jobs.
PointCloud enumerate(const ConvexBody& B, std::int64_t k, unsigned jobs = 1);
std::int64_t count(const ConvexBody& B, std::int64_t k, unsigned jobs = 1);

// count(B,k) - volume(B) k^n
Rat discrepancy(const ConvexBody& B, std::int64_t k);

// (1/k^n) sum of G over B ∩ Z^n/k
Rat concave_sum(const ConvexBody& B, const ConcavePL& G, std::int64_t k);

struct ShiftStrategy {
    enum class Kind { Analytic, Sample } kind = Kind::Analytic;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    static ShiftStrategy analytic() { return {}; }
    static ShiftStrategy sample(std::size_t n, std::uint64_t seed) { return {Kind::Sample, n, seed}; }
};

struct ShiftedMinCount {
    // certified: min over shifts x in [-1/2,1/2]^n of count(B + x, ell) >= analytic_lb
    Int analytic_lb;
    // rational upper bound on C = n^{3/2}/(2 r) used for analytic_lb (0 if |B| = 0)
    Rat constant_ub;
    // empirical minimum over sampled shifts; an upper bound on the true minimum
    std::optional<std::int64_t> sampled_min;
};

ShiftedMinCount shifted_min_count(const ConvexBody& B, std::int64_t ell, const ShiftStrategy& strategy);

// Rational upper bound on n^{3/2} / (2 r).
Rat lower_bound_constant_ub(std::size_t n, const Rat& r);

}  // namespace okb
