#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "okb/estimates.hpp"
#include "okb/lattice.hpp"
#include "okb/series.hpp"
#include "okb/thresholds.hpp"

namespace okb::io {

// ordered so that emitted documents keep insertion order
using Json = nlohmann::ordered_json;

// All readers throw InputError on malformed documents. Rationals are "p/q"
// strings (integers are also accepted on input).
Json read_file(const std::string& path);
Json parse(const std::string& text);
void write_file(const std::string& path, const std::string& content);

Rat rat_from(const Json& j);
Json to_json(const Rat& q);

// {"dim": n, "vertices": [[...], ...]} or {"dim": n, "halfspaces": [{"normal": [...], "offset": ...}]}
ConvexBody polytope_from(const Json& j);
Json to_json(const ConvexBody& B);

// {"k": k, "points": [[int, ...], ...]}
PointCloud point_cloud_from(const Json& j);
Json to_json(const PointCloud& pc);

// {"backend": "toric|curve|canonical|synthetic", "polytope", "genus", "gaps",
//  "per_k_gaps", "gap_sets", "levels", "label"} or {"bundled": "<label>"}
GradedSeriesModel model_from(const Json& j);
Json to_json(const GradedSeriesModel& M);

// {"label", "A", "G": {"pieces": [{"grad": [...], "const": ...}]}}; the
// shorthand {"divisorial": n} gives A = 1, G = p_1
ValuationModel valuation_from(const Json& j);
Json to_json(const ValuationModel& v);
// a single valuation, an array of them, or {"valuations": [...]}
std::vector<ValuationModel> family_from(const Json& j);

struct SweepSpec {
    Rat tau = Rat(1, 2);
    std::string m_rule = "ceil_tau";
    KRange range;
};
// {"tau": "p/q", "m_rule": "...", "k_range": [k0, k1]}; missing keys keep defaults
SweepSpec sweep_from(const Json& j, SweepSpec defaults = {});

// {"name", "passed", "grid", "assertions": [...], "fitted_constants", "exponent", "columns", "rows"}
Json to_json(const SweepReport& r);

}  // namespace okb::io
