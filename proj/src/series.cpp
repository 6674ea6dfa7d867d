#include "okb/series.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "okb/errors.hpp"

namespace okb {

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Toric: return "toric";
        case Backend::Curve: return "curve";
        case Backend::Canonical: return "canonical";
        case Backend::Synthetic: return "synthetic";
    }
    return "?";
}

struct GradedSeriesModel::Cache {
    std::shared_mutex mutex;
    std::unordered_map<std::int64_t, std::unique_ptr<PointCloud>> bodies;
};

bool is_gap_sequence(int genus, const std::vector<std::int64_t>& gaps) {
    if (genus < 1 || gaps.size() != static_cast<std::size_t>(genus)) return false;
    if (gaps.front() != 1) return false;
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (gaps[i] <= gaps[i - 1]) return false;
    if (gaps.back() > 2 * genus - 1) return false;
    std::vector<bool> gap(2 * genus, false);
    for (auto n : gaps) gap[n] = true;
    for (std::int64_t a = 1; a < 2 * genus; ++a) {
        if (gap[a]) continue;
        for (std::int64_t b = a; a + b < 2 * genus; ++b)
            if (!gap[b] && gap[a + b]) return false;
    }
    return true;
}

std::vector<std::vector<std::int64_t>> numerical_semigroup_gaps(int genus) {
    std::vector<std::vector<std::int64_t>> out;
    if (genus == 0) return {{}};
    // choose g-1 further gaps from {2,...,2g-1}
    const std::int64_t top = 2 * genus - 1;
    std::vector<std::int64_t> cur{1};
    auto rec = [&](auto&& self, std::int64_t next) -> void {
        if (cur.size() == static_cast<std::size_t>(genus)) {
            if (is_gap_sequence(genus, cur)) out.push_back(cur);
            return;
        }
        for (std::int64_t x = next; x <= top; ++x) {
            cur.push_back(x);
            self(self, x + 1);
            cur.pop_back();
        }
    };
    rec(rec, 2);
    return out;
}

std::int64_t canonical_dk(int genus, std::int64_t k) {
    if (k == 1) return genus;
    return k * (2 * genus - 2) + 1 - genus;
}

GradedSeriesModel GradedSeriesModel::toric(ConvexBody polytope) {
    if (polytope.is_empty()) throw DomainError("toric model needs a nonempty polytope");
    GradedSeriesModel M;
    M.backend_ = Backend::Toric;
    M.ambient_ = std::move(polytope);
    M.label = "toric";
    M.cache_ = std::make_shared<Cache>();
    return M;
}

GradedSeriesModel GradedSeriesModel::curve(int genus, std::vector<std::int64_t> gaps) {
    if (!is_gap_sequence(genus, gaps)) throw DomainError("not a Weierstrass gap sequence (need 1 = N_1 < ... < N_g <= 2g-1 with a semigroup complement)");
    GradedSeriesModel M;
    M.backend_ = Backend::Curve;
    M.ambient_ = ConvexBody::segment(0, 1);
    M.genus_ = genus;
    M.gaps_ = std::move(gaps);
    M.label = "curve";
    M.cache_ = std::make_shared<Cache>();
    return M;
}

GradedSeriesModel GradedSeriesModel::canonical(int genus, std::map<std::int64_t, std::vector<std::int64_t>> per_k_gaps,
                                               std::optional<std::set<std::int64_t>> levels) {
    if (genus < 2) throw DomainError("canonical model needs genus >= 2");
    for (auto& [k, g] : per_k_gaps) {
        if (k < 1) throw DomainError("canonical gap level must be positive");
        std::sort(g.begin(), g.end());
        if (std::adjacent_find(g.begin(), g.end()) != g.end()) throw DomainError("repeated entry in canonical gap set");
        const std::int64_t top = k * (2 * genus - 2);
        const std::int64_t want = top + 1 - canonical_dk(genus, k);
        if (static_cast<std::int64_t>(g.size()) != want)
            throw DomainError("canonical gap set at k=" + std::to_string(k) + " must have " + std::to_string(want) + " entries");
        for (auto x : g)
            if (x < 0 || x > top) throw DomainError("canonical gap outside {0,...,k(2g-2)}");
    }
    GradedSeriesModel M;
    M.backend_ = Backend::Canonical;
    M.ambient_ = ConvexBody::segment(0, 2 * genus - 2);
    M.genus_ = genus;
    M.per_k_gaps_ = std::move(per_k_gaps);
    if (levels)
        for (auto k : *levels)
            if (k < 1) throw DomainError("levels must be positive");
    M.levels_ = std::move(levels);
    M.label = "canonical";
    M.cache_ = std::make_shared<Cache>();
    return M;
}

GradedSeriesModel GradedSeriesModel::synthetic(ConvexBody ambient, std::map<std::int64_t, PointCloud> gap_sets,
                                               std::optional<std::set<std::int64_t>> levels, bool validate_superadditivity) {
    if (ambient.is_empty()) throw DomainError("synthetic model needs a nonempty ambient body");
    for (const auto& [k, pc] : gap_sets) {
        if (pc.k != k) throw DomainError("gap set denominator does not match its level");
        for (std::size_t i = 0; i < pc.size(); ++i) {
            if (pc.points[i].size() != ambient.dim()) throw InputError("gap point dimension mismatch");
            if (!ambient.contains(pc.coords(i))) throw DomainError("gap point outside the ambient body: " + to_string(pc.coords(i)));
        }
    }
    if (levels)
        for (auto k : *levels)
            if (k < 1) throw DomainError("levels must be positive");
    GradedSeriesModel M;
    M.backend_ = Backend::Synthetic;
    M.ambient_ = std::move(ambient);
    M.gap_sets_ = std::move(gap_sets);
    M.levels_ = std::move(levels);
    M.label = "synthetic";
    M.cache_ = std::make_shared<Cache>();
    for (const auto& [k, pc] : M.gap_sets_)
        if (M.in_levels(k) && D_k(M, k) == static_cast<std::int64_t>(pc.size()))
            throw DomainError("declared level k=" + std::to_string(k) + " has no points");
    if (validate_superadditivity) {
        std::int64_t top = 1;
        if (M.levels_ && !M.levels_->empty()) top = *M.levels_->rbegin();
        if (!M.gap_sets_.empty()) top = std::max(top, 2 * M.gap_sets_.rbegin()->first);
        for (std::int64_t k = 1; k < top; ++k) {
            if (!M.in_levels(k)) continue;
            for (std::int64_t kp = k; k + kp <= top; ++kp) {
                if (!M.in_levels(kp) || !M.in_levels(k + kp)) continue;
                if (superadditivity_violation(M, k, kp))
                    throw DomainError("synthetic model is not superadditive at k=" + std::to_string(k) + ", k'=" + std::to_string(kp));
            }
        }
    }
    return M;
}

bool GradedSeriesModel::in_levels(std::int64_t k) const {
    if (k < 1) return false;
    if (levels_) return levels_->count(k) > 0;
    return true;
}

std::optional<std::int64_t> GradedSeriesModel::max_level() const {
    if (levels_ && !levels_->empty()) return *levels_->rbegin();
    return std::nullopt;
}

void GradedSeriesModel::require_level(std::int64_t k) const {
    if (!in_levels(k)) throw DomainError("k=" + std::to_string(k) + " is not a level of the model");
}

PointCloud GradedSeriesModel::compute(std::int64_t k) const {
    switch (backend_) {
        case Backend::Toric: return enumerate(ambient_, k);
        case Backend::Curve: {
            std::vector<IPoint> pts;
            for (std::int64_t s = 0; s <= k; ++s)
                if (!std::binary_search(gaps_.begin(), gaps_.end(), s)) pts.push_back({k - s});
            return PointCloud(k, std::move(pts));
        }
        case Backend::Canonical: {
            const std::int64_t top = k * (2 * genus_ - 2);
            std::vector<IPoint> pts;
            auto it = per_k_gaps_.find(k);
            if (it == per_k_gaps_.end()) {
                for (std::int64_t x = 0; x < canonical_dk(genus_, k); ++x) pts.push_back({x});
            } else {
                for (std::int64_t x = 0; x <= top; ++x)
                    if (!std::binary_search(it->second.begin(), it->second.end(), x)) pts.push_back({x});
            }
            return PointCloud(k, std::move(pts));
        }
        case Backend::Synthetic: {
            PointCloud all = enumerate(ambient_, k);
            auto it = gap_sets_.find(k);
            if (it == gap_sets_.end()) return all;
            std::vector<IPoint> keep;
            for (auto& p : all.points)
                if (!it->second.contains(p)) keep.push_back(std::move(p));
            return PointCloud(k, std::move(keep));
        }
    }
    return {};
}

const PointCloud& GradedSeriesModel::discrete_body(std::int64_t k) const {
    require_level(k);
    {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->bodies.find(k);
        if (it != cache_->bodies.end()) return *it->second;
    }
    auto pc = std::make_unique<PointCloud>(compute(k));
    std::unique_lock lock(cache_->mutex);
    auto [it, inserted] = cache_->bodies.emplace(k, std::move(pc));
    return *it->second;
}

PointCloud discrete_body(const GradedSeriesModel& M, std::int64_t k) { return M.discrete_body(k); }

PointCloud idealized_body(const GradedSeriesModel& M, std::int64_t k) { return enumerate(M.ambient(), k); }

std::int64_t d_k(const GradedSeriesModel& M, std::int64_t k) { return static_cast<std::int64_t>(M.discrete_body(k).size()); }

std::int64_t D_k(const GradedSeriesModel& M, std::int64_t k) { return count(M.ambient(), k); }

PointCloud gap_set(const GradedSeriesModel& M, std::int64_t k) {
    const PointCloud& body = M.discrete_body(k);
    PointCloud all = idealized_body(M, k);
    std::vector<IPoint> out;
    for (auto& p : all.points)
        if (!body.contains(p)) out.push_back(std::move(p));
    return PointCloud(k, std::move(out));
}

std::vector<std::pair<std::int64_t, std::int64_t>> recover_gaps(const GradedSeriesModel& M) {
    if (M.backend() != Backend::Curve) throw DomainError("recover_gaps needs a curve model");
    const int g = M.genus();
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    std::int64_t want = 1;
    for (std::int64_t k = 1; want <= g && k <= 2 * g; ++k) {
        std::int64_t diff = D_k(M, k) - d_k(M, k);
        if (diff == want) {
            out.emplace_back(k, k);
            ++want;
        }
    }
    return out;
}

std::vector<std::int64_t> k_weierstrass_sequence(const GradedSeriesModel& M, std::int64_t k) {
    if (M.backend() != Backend::Canonical) throw DomainError("k-Weierstrass sequences need a canonical model");
    std::vector<std::int64_t> out;
    for (const auto& p : M.discrete_body(k).points) out.push_back(p[0] + 1);
    return out;
}

std::vector<GapRow> gap_table(const GradedSeriesModel& M, std::int64_t k_max) {
    if (k_max < 1) throw DomainError("k_max must be positive");
    std::vector<GapRow> rows;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        if (!M.in_levels(k)) continue;
        GapRow r{k, d_k(M, k), D_k(M, k), 0};
        r.diff = r.D - r.d;
        rows.push_back(r);
    }
    return rows;
}

MaxGapStat max_gap_stat(const GradedSeriesModel& M, std::int64_t k) {
    const PointCloud& body = M.discrete_body(k);
    MaxGapStat s;
    s.ambient_max = range_of(M.ambient(), AffineFunctional::coordinate(M.dim(), 0)).second;
    std::int64_t best = body.points.front()[0];
    for (const auto& p : body.points) best = std::max(best, p[0]);
    s.discrete_max = make_rat(best, k);
    s.difference = s.ambient_max - s.discrete_max;
    return s;
}

std::optional<IPoint> superadditivity_violation(const GradedSeriesModel& M, std::int64_t k, std::int64_t kp) {
    const PointCloud& a = M.discrete_body(k);
    const PointCloud& b = M.discrete_body(kp);
    const PointCloud& c = M.discrete_body(k + kp);
    IPoint s(M.dim());
    for (const auto& x : a.points) {
        for (const auto& y : b.points) {
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + y[i];
            if (!c.contains(s)) return s;
        }
    }
    return std::nullopt;
}

namespace models {

namespace {

GradedSeriesModel named(GradedSeriesModel M, std::string label) {
    M.label = std::move(label);
    return M;
}

}  // namespace

GradedSeriesModel segment() { return named(GradedSeriesModel::toric(ConvexBody::segment(0, 1)), "segment"); }

GradedSeriesModel unit_simplex() { return named(GradedSeriesModel::toric(ConvexBody::simplex(2)), "unit-simplex"); }

GradedSeriesModel anticanonical_p2() { return named(GradedSeriesModel::toric(ConvexBody::simplex(2, 3)), "anticanonical-P2"); }

GradedSeriesModel trapezoid() {
    return named(GradedSeriesModel::toric(ConvexBody::hull({{0, 0}, {2, 0}, {1, 1}, {0, 1}})), "trapezoid");
}

GradedSeriesModel quartic(std::vector<std::int64_t> gaps) {
    std::string label = "quartic-gaps";
    for (auto g : gaps) label += "-" + std::to_string(g);
    return named(GradedSeriesModel::curve(3, std::move(gaps)), label);
}

GradedSeriesModel canonical_generic(int genus) {
    return named(GradedSeriesModel::canonical(genus), "canonical-g" + std::to_string(genus));
}

std::vector<std::string> canonical_panel_names() {
    return {"generic", "flex", "hyperflex", "sextactic1", "sextactic2", "sextactic3"};
}

GradedSeriesModel canonical_panel(const std::string& name) {
    static const std::map<std::string, std::map<std::int64_t, std::vector<std::int64_t>>> panels{
        {"generic", {{1, {3, 4}}, {2, {6, 7, 8}}}},
        {"flex", {{1, {2, 4}}, {2, {5, 7, 8}}}},
        {"hyperflex", {{1, {2, 3}}, {2, {3, 6, 7}}}},
        {"sextactic1", {{1, {3, 4}}, {2, {5, 7, 8}}}},
        {"sextactic2", {{1, {3, 4}}, {2, {5, 6, 8}}}},
        {"sextactic3", {{1, {3, 4}}, {2, {5, 6, 7}}}},
    };
    auto it = panels.find(name);
    if (it == panels.end()) throw InputError("unknown canonical panel '" + name + "'");
    // the panels only describe levels 1 and 2
    return named(GradedSeriesModel::canonical(3, it->second, std::set<std::int64_t>{1, 2}), "K_C-" + name);
}

GradedSeriesModel p1xp1(bool ramification) {
    auto body = ConvexBody::hull({{0, 0}, {make_rat(1, 2), 0}, {make_rat(1, 2), 1}, {0, 3}});
    std::map<std::int64_t, PointCloud> gaps;
    gaps.emplace(2, PointCloud(2, {ramification ? IPoint{1, 1} : IPoint{1, 2}}));
    return named(GradedSeriesModel::synthetic(std::move(body), std::move(gaps), std::set<std::int64_t>{1, 2}, true),
                 ramification ? "P1xP1-ramification" : "P1xP1-non-ramification");
}

GradedSeriesModel top_gap_square(std::int64_t k_max) {
    std::map<std::int64_t, PointCloud> gaps;
    std::set<std::int64_t> levels;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        std::vector<IPoint> col;
        for (std::int64_t j = 0; j <= k; ++j) col.push_back({k, j});
        gaps.emplace(k, PointCloud(k, std::move(col)));
        levels.insert(k);
    }
    return named(GradedSeriesModel::synthetic(ConvexBody::unit_cube(2), std::move(gaps), std::move(levels)), "top-gap-square");
}

std::vector<GradedSeriesModel> bundled(std::int64_t k_max) {
    std::vector<GradedSeriesModel> out{segment(), unit_simplex(), anticanonical_p2(), trapezoid(),
                                       quartic({1, 2, 3}), quartic({1, 2, 4}), quartic({1, 2, 5}),
                                       canonical_generic(3), p1xp1(false), p1xp1(true), top_gap_square(k_max)};
    for (const auto& name : canonical_panel_names())
        if (name != "generic") out.push_back(canonical_panel(name));
    return out;
}

}  // namespace models

}  // namespace okb
