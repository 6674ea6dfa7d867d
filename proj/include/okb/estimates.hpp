#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "okb/geometry.hpp"
#include "okb/lattice.hpp"
#include "okb/series.hpp"
#include "okb/thresholds.hpp"

namespace okb {

// One assertion evaluated over a grid. witness holds the first failing datum.
struct Check {
    std::string assertion;
    std::int64_t trials = 0;
    std::int64_t failures = 0;
    std::string witness;
    bool passed() const { return failures == 0; }
};

// exponent = -inf when every sample sits exactly at the limit
struct RateFit {
    double exponent = 0;
    double residual = 0;
    std::size_t used = 0;
    bool exact() const;
};

struct SweepReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> grid;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, Rat>> fitted;
    std::vector<Check> checks;
    std::optional<RateFit> rate;

    // witness is only built on failure
    void record(const std::string& assertion, bool ok, const std::function<std::string()>& witness);
    void fit(const std::string& name, const Rat& value);
    const Check* find(const std::string& assertion) const;
    const Rat* fitted_value(const std::string& name) const;
    bool passed() const;
    std::string csv() const;
    // merges other's checks (prefixed by its name when it has one) and appends its rows
    void absorb(const SweepReport& other);
};

struct KRange {
    std::int64_t k_min = 1, k_max = 40;
    std::int64_t mid() const { return (k_min + k_max) / 2; }
    bool upper(std::int64_t k) const { return k > mid(); }
    void validate() const;
};

// sup over the upper half of the range <= 2 * sup over the lower half; values
// below zero count as zero. Records the check and returns it.
bool check_two_halves(SweepReport& R, const std::string& assertion, const KRange& range,
                      const std::vector<std::pair<std::int64_t, Rat>>& values);

// least squares slope of log|value - limit| against log k, over the nonzero errors
RateFit rate_fit(const std::vector<std::pair<std::int64_t, Rat>>& samples, const Rat& limit);
RateFit rate_fit_errors(const std::vector<std::pair<std::int64_t, double>>& errors);

// ---- samplers (seeded, deterministic) ----

// convex sub-bodies of K with |P| >= nu: hulls of random points of K, and every
// fourth one a random box cut down to K
std::vector<ConvexBody> sample_sub_bodies(const ConvexBody& K, const Rat& nu, std::size_t N, std::uint64_t seed);
// full-dimensional hulls of random points of [0,1]^n with coordinates in Z/den
std::vector<ConvexBody> sample_polytopes(std::size_t n, std::size_t N, std::uint64_t seed, long den = 12);
// min of 1-3 random affine pieces, shifted so that min over P lies in [0,1]
ConcavePL sample_concave(const ConvexBody& P, std::uint64_t seed);

// ℓ_k policies: "k", "ceil_half", "ceil_sqrt", "ceil_frac:c"
struct EllRule {
    enum class Kind { K, CeilHalf, CeilSqrt, CeilFrac };
    Kind kind = Kind::CeilHalf;
    Rat c;
    static EllRule parse(const std::string& s);
    std::string name() const;
    std::int64_t eval(std::int64_t k) const;  // in [1, k]
};

// ---- verification sweeps ----

SweepReport verify_uniform_ehrhart(const ConvexBody& K, const std::vector<ConvexBody>& bodies, const Rat& nu,
                                   const KRange& range, unsigned jobs = 1);

SweepReport verify_lower_bound_constant(const ConvexBody& P, const KRange& range);
// the same over many seeded bodies of dimension 1..n_max
SweepReport verify_lower_bound_suite(std::size_t n_max, std::size_t N, std::uint64_t seed, const KRange& range,
                                     unsigned jobs = 1);

SweepReport verify_concave_sum_bound(const std::vector<std::pair<ConvexBody, ConcavePL>>& samples,
                                     const KRange& range, unsigned jobs = 1);

// V = nullopt runs the slice-cone variant
SweepReport verify_cone_counts(const ConvexBody& B, const Rat& a, const Rat& b, const std::optional<Point>& V,
                               const EllRule& ell, const KRange& range);

// G = p_1
SweepReport verify_maxp1(const GradedSeriesModel& M, const KRange& range);

SweepReport verify_S_two_sided(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau,
                               const MRule& rule, const KRange& range, const Rat& tol = default_tol(),
                               unsigned jobs = 1);

SweepReport verify_delta_rate(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                              const Rat& tau, const MRule& rule, const KRange& range,
                              const Rat& tol = default_tol(), unsigned jobs = 1);

SweepReport verify_endpoint_limits(const GradedSeriesModel& M, const ValuationModel& v, const KRange& range,
                                   unsigned jobs = 1);

// (D_k - d_k)/k^{n-1} stays bounded
SweepReport verify_dkdk(const GradedSeriesModel& M, const KRange& range);

// count(K,k) = count((k/l)K, l) and the rescaled sub-cone equals a translate
// of the apex cone, on N random polytopes per dimension n in {2,3}
SweepReport verify_counting_translation(std::size_t N, std::uint64_t seed, std::int64_t k_max, unsigned jobs = 1);

// figure data for the quartic, canonical and P1xP1 models plus the
// Weierstrass identities (exhaustive semigroups up to genus g_max)
SweepReport verify_weierstrass(int g_max = 8, std::int64_t k_max = 50);

// jumping sandwich, monotonicity, superadditivity, Brunn and Fujita-Odaka
// on every bundled model for k <= k_max
SweepReport verify_sandwich_suite(std::int64_t k_max, unsigned jobs = 1);

// first moments of the compatible family at level k against the tail barycenter
SweepReport verify_empirical_measure(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau,
                                     const std::vector<std::int64_t>& ks, double tolerance);

}  // namespace okb
