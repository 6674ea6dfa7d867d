#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "okb/geometry.hpp"
#include "okb/lattice.hpp"

namespace okb {

enum class Backend { Toric, Curve, Canonical, Synthetic };

std::string backend_name(Backend b);

// A graded series: the ambient body Δ and a rule producing the discrete
// bodies Δ_k ⊆ Δ ∩ Z^n/k. Immutable; copies share a cache of Δ_k.
class GradedSeriesModel {
public:
    static GradedSeriesModel toric(ConvexBody polytope);
    // O_C(p) on a genus g curve with Weierstrass gaps 1 = N_1 < ... < N_g <= 2g-1
    static GradedSeriesModel curve(int genus, std::vector<std::int64_t> gaps);
    // K_C; per_k_gaps[k] lists the integers of {0,...,k(2g-2)} missing from kΔ_k.
    // Levels without an entry use the generic pattern kΔ_k = {0,...,d_k-1}.
    static GradedSeriesModel canonical(int genus, std::map<std::int64_t, std::vector<std::int64_t>> per_k_gaps = {},
                                       std::optional<std::set<std::int64_t>> levels = std::nullopt);
    // levels: declared N(L); nullopt means every k >= 1.
    static GradedSeriesModel synthetic(ConvexBody ambient, std::map<std::int64_t, PointCloud> gap_sets,
                                       std::optional<std::set<std::int64_t>> levels = std::nullopt,
                                       bool validate_superadditivity = false);

    Backend backend() const { return backend_; }
    const ConvexBody& ambient() const { return ambient_; }
    std::size_t dim() const { return ambient_.dim(); }
    bool in_levels(std::int64_t k) const;
    // largest declared level, if the levels are finite
    std::optional<std::int64_t> max_level() const;
    const std::optional<std::set<std::int64_t>>& declared_levels() const { return levels_; }

    int genus() const { return genus_; }
    const std::vector<std::int64_t>& gaps() const { return gaps_; }
    const std::map<std::int64_t, std::vector<std::int64_t>>& per_k_gaps() const { return per_k_gaps_; }
    const std::map<std::int64_t, PointCloud>& gap_sets() const { return gap_sets_; }

    // label used in reports
    std::string label;

    const PointCloud& discrete_body(std::int64_t k) const;

private:
    struct Cache;
    Backend backend_ = Backend::Toric;
    ConvexBody ambient_;
    int genus_ = 0;
    std::vector<std::int64_t> gaps_;
    std::map<std::int64_t, std::vector<std::int64_t>> per_k_gaps_;
    std::map<std::int64_t, PointCloud> gap_sets_;
    std::optional<std::set<std::int64_t>> levels_;
    std::shared_ptr<Cache> cache_;

    PointCloud compute(std::int64_t k) const;
    void require_level(std::int64_t k) const;
};

PointCloud discrete_body(const GradedSeriesModel& M, std::int64_t k);
// Δ ∩ Z^n/k
PointCloud idealized_body(const GradedSeriesModel& M, std::int64_t k);
std::int64_t d_k(const GradedSeriesModel& M, std::int64_t k);
std::int64_t D_k(const GradedSeriesModel& M, std::int64_t k);
PointCloud gap_set(const GradedSeriesModel& M, std::int64_t k);

// (N_i, minimal k with D_k - d_k = i) for i = 1..g; curve backend only.
std::vector<std::pair<std::int64_t, std::int64_t>> recover_gaps(const GradedSeriesModel& M);

// kΔ_k + 1; canonical backend only.
std::vector<std::int64_t> k_weierstrass_sequence(const GradedSeriesModel& M, std::int64_t k);

struct GapRow {
    std::int64_t k, d, D, diff;
};
std::vector<GapRow> gap_table(const GradedSeriesModel& M, std::int64_t k_max);

struct MaxGapStat {
    Rat ambient_max, discrete_max, difference;
};
MaxGapStat max_gap_stat(const GradedSeriesModel& M, std::int64_t k);

// kΔ_k + k'Δ_k' ⊆ (k+k')Δ_{k+k'}; returns the first offending sum if any.
std::optional<IPoint> superadditivity_violation(const GradedSeriesModel& M, std::int64_t k, std::int64_t kp);

// d_k of the canonical series of a genus g curve
std::int64_t canonical_dk(int genus, std::int64_t k);

// All gap sequences of numerical semigroups of genus g.
std::vector<std::vector<std::int64_t>> numerical_semigroup_gaps(int genus);
bool is_gap_sequence(int genus, const std::vector<std::int64_t>& gaps);

namespace models {

GradedSeriesModel segment();           // toric [0,1]
GradedSeriesModel unit_simplex();      // toric conv{0, e1, e2}
GradedSeriesModel anticanonical_p2();  // toric 3 * unit simplex
GradedSeriesModel trapezoid();         // toric conv{(0,0),(2,0),(1,1),(0,1)}
GradedSeriesModel quartic(std::vector<std::int64_t> gaps);  // curve, g = 3
GradedSeriesModel canonical_generic(int genus);
// the six K_C panels (g = 3, levels 1 and 2): "generic", "flex", "hyperflex",
// "sextactic1", "sextactic2", "sextactic3"
GradedSeriesModel canonical_panel(const std::string& name);
std::vector<std::string> canonical_panel_names();
// conv{(0,0),(1/2,0),(1/2,1),(0,3)} with levels {1,2}
GradedSeriesModel p1xp1(bool ramification);
// unit square with the column {x_1 = 1} removed at every level up to k_max
GradedSeriesModel top_gap_square(std::int64_t k_max);

// every model above with its default parameters; top_gap_square up to k_max
std::vector<GradedSeriesModel> bundled(std::int64_t k_max = 40);

}  // namespace models

}  // namespace okb
