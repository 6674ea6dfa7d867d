#include "okb/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "okb/errors.hpp"

namespace okb::io {

namespace {

const Json& at(const Json& j, const char* key) {
    if (!j.is_object()) throw InputError(std::string("expected an object with key \"") + key + "\"");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing key \"") + key + "\"");
    return *it;
}

std::int64_t int_from(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

std::vector<std::int64_t> ints_from(const Json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& x : j) out.push_back(int_from(x, what));
    return out;
}

Vec vec_from(const Json& j, std::size_t n, const char* what) {
    if (!j.is_array() || j.size() != n)
        throw InputError(std::string(what) + " must be an array of " + std::to_string(n) + " rationals");
    Vec out;
    for (const auto& x : j) out.push_back(rat_from(x));
    return out;
}

Json vec_json(const Vec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

std::int64_t level_key(const std::string& s) {
    std::size_t used = 0;
    long long k = 0;
    try {
        k = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || k < 1) throw InputError("level keys must be positive integers, got \"" + s + "\"");
    return k;
}

std::optional<std::set<std::int64_t>> levels_from(const Json& j) {
    auto it = j.find("levels");
    if (it == j.end()) return std::nullopt;
    auto v = ints_from(*it, "levels");
    return std::set<std::int64_t>(v.begin(), v.end());
}

GradedSeriesModel bundled_model(const std::string& name, std::int64_t k_max) {
    for (auto& M : models::bundled(k_max))
        if (M.label == name) return M;
    for (const auto& p : models::canonical_panel_names())
        if ("K_C-" + p == name) return models::canonical_panel(p);
    if (name.rfind("canonical-g", 0) == 0) {
        const int g = static_cast<int>(level_key(name.substr(11)));
        return models::canonical_generic(g);
    }
    throw InputError("unknown bundled model \"" + name + "\"");
}

}  // namespace

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
}

Rat rat_from(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw InputError("expected a rational as a \"p/q\" string, got " + j.dump());
}

Json to_json(const Rat& q) { return q.get_str(); }

ConvexBody polytope_from(const Json& j) {
    const std::int64_t n = int_from(at(j, "dim"), "dim");
    if (n < 1 || n > 4) throw InputError("dim must lie in 1..4");
    const auto dim = static_cast<std::size_t>(n);
    const bool has_v = j.contains("vertices"), has_h = j.contains("halfspaces");
    if (!has_v && !has_h) throw InputError("polytope needs \"vertices\" or \"halfspaces\"");
    std::optional<ConvexBody> from_h;
    if (has_h) {
        const auto& hs = j["halfspaces"];
        if (!hs.is_array()) throw InputError("halfspaces must be an array");
        std::vector<HalfSpace> list;
        for (const auto& h : hs) list.push_back({vec_from(at(h, "normal"), dim, "normal"), rat_from(at(h, "offset"))});
        from_h = ConvexBody::from_halfspaces(dim, list);
    }
    if (!has_v) return *from_h;
    const auto& vs = j["vertices"];
    if (!vs.is_array() || vs.empty()) throw InputError("vertices must be a nonempty array");
    std::vector<Point> pts;
    for (const auto& v : vs) pts.push_back(vec_from(v, dim, "vertex"));
    ConvexBody B = ConvexBody::hull(pts);
    if (from_h && *from_h != B) throw InputError("vertices and halfspaces describe different polytopes");
    return B;
}

Json to_json(const ConvexBody& B) {
    Json out;
    out["dim"] = B.dim();
    Json vs = Json::array();
    for (const auto& v : B.vertices()) vs.push_back(vec_json(v));
    out["vertices"] = vs;
    Json hs = Json::array();
    for (const auto& h : B.halfspaces()) hs.push_back(Json{{"normal", vec_json(h.normal)}, {"offset", to_json(h.offset)}});
    out["halfspaces"] = hs;
    return out;
}

PointCloud point_cloud_from(const Json& j) {
    const std::int64_t k = int_from(at(j, "k"), "k");
    if (k < 1) throw InputError("k must be positive");
    const auto& ps = at(j, "points");
    if (!ps.is_array()) throw InputError("points must be an array");
    std::vector<IPoint> pts;
    for (const auto& p : ps) pts.push_back(ints_from(p, "point"));
    for (const auto& p : pts)
        if (p.size() != pts.front().size()) throw InputError("points of different dimensions");
    return PointCloud(k, std::move(pts));
}

Json to_json(const PointCloud& pc) {
    Json pts = Json::array();
    for (const auto& p : pc.points) pts.push_back(p);
    return Json{{"k", pc.k}, {"points", pts}};
}

GradedSeriesModel model_from(const Json& j) {
    try {
        if (j.contains("bundled")) {
            const auto& name = j["bundled"];
            if (!name.is_string()) throw InputError("bundled must be a model label");
            const std::int64_t k_max = j.contains("k_max") ? int_from(j["k_max"], "k_max") : 40;
            return bundled_model(name.get<std::string>(), k_max);
        }
        const auto& b = at(j, "backend");
        if (!b.is_string()) throw InputError("backend must be a string");
        const std::string backend = b.get<std::string>();
        std::optional<GradedSeriesModel> M;
        if (backend == "toric") {
            M = GradedSeriesModel::toric(polytope_from(at(j, "polytope")));
        } else if (backend == "curve") {
            M = GradedSeriesModel::curve(static_cast<int>(int_from(at(j, "genus"), "genus")), ints_from(at(j, "gaps"), "gaps"));
        } else if (backend == "canonical") {
            std::map<std::int64_t, std::vector<std::int64_t>> per_k;
            if (j.contains("per_k_gaps")) {
                const auto& pk = j["per_k_gaps"];
                if (!pk.is_object()) throw InputError("per_k_gaps must map levels to integer lists");
                for (auto it = pk.begin(); it != pk.end(); ++it) per_k[level_key(it.key())] = ints_from(it.value(), "per_k_gaps");
            }
            M = GradedSeriesModel::canonical(static_cast<int>(int_from(at(j, "genus"), "genus")), per_k, levels_from(j));
        } else if (backend == "synthetic") {
            std::map<std::int64_t, PointCloud> gaps;
            if (j.contains("gap_sets")) {
                const auto& gs = j["gap_sets"];
                if (!gs.is_object()) throw InputError("gap_sets must map levels to point lists");
                for (auto it = gs.begin(); it != gs.end(); ++it) {
                    const std::int64_t k = level_key(it.key());
                    Json pc = it.value();
                    if (pc.is_array()) pc = Json{{"k", k}, {"points", pc}};
                    auto cloud = point_cloud_from(pc);
                    if (cloud.k != k) throw InputError("gap_sets entry " + it.key() + " has a different k");
                    gaps.emplace(k, std::move(cloud));
                }
            }
            const bool check = j.contains("check_superadditivity") && j["check_superadditivity"].get<bool>();
            M = GradedSeriesModel::synthetic(polytope_from(at(j, "polytope")), std::move(gaps), levels_from(j), check);
        } else {
            throw InputError("unknown backend \"" + backend + "\"");
        }
        if (j.contains("label")) {
            if (!j["label"].is_string()) throw InputError("label must be a string");
            M->label = j["label"].get<std::string>();
        }
        return *M;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed model: ") + e.what());
    }
}

Json to_json(const GradedSeriesModel& M) {
    Json out;
    out["backend"] = backend_name(M.backend());
    out["label"] = M.label;
    switch (M.backend()) {
        case Backend::Toric:
            out["polytope"] = to_json(M.ambient());
            break;
        case Backend::Curve:
            out["genus"] = M.genus();
            out["gaps"] = M.gaps();
            break;
        case Backend::Canonical: {
            out["genus"] = M.genus();
            Json pk = Json::object();
            for (const auto& [k, g] : M.per_k_gaps()) pk[std::to_string(k)] = g;
            out["per_k_gaps"] = pk;
            break;
        }
        case Backend::Synthetic: {
            out["polytope"] = to_json(M.ambient());
            Json gs = Json::object();
            for (const auto& [k, pc] : M.gap_sets()) gs[std::to_string(k)] = to_json(pc);
            out["gap_sets"] = gs;
            break;
        }
    }
    if (M.declared_levels()) out["levels"] = *M.declared_levels();
    return out;
}

ValuationModel valuation_from(const Json& j) {
    try {
        if (j.contains("divisorial")) {
            const std::int64_t n = int_from(j["divisorial"], "divisorial");
            if (n < 1 || n > 4) throw InputError("divisorial dimension must lie in 1..4");
            auto v = ValuationModel::divisorial(static_cast<std::size_t>(n));
            if (j.contains("label")) v.label = j["label"].get<std::string>();
            return v;
        }
        ValuationModel v;
        v.label = j.contains("label") ? j["label"].get<std::string>() : std::string("v");
        v.A = rat_from(at(j, "A"));
        const auto& pieces = at(at(j, "G"), "pieces");
        if (!pieces.is_array() || pieces.empty()) throw InputError("G needs a nonempty list of pieces");
        std::vector<AffineFunctional> fs;
        const auto& first = at(pieces.front(), "grad");
        if (!first.is_array() || first.empty()) throw InputError("grad must be a nonempty array");
        const std::size_t n = first.size();
        for (const auto& p : pieces) fs.push_back({vec_from(at(p, "grad"), n, "grad"), rat_from(at(p, "const"))});
        v.G = ConcavePL(std::move(fs));
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed valuation: ") + e.what());
    }
}

Json to_json(const ValuationModel& v) {
    Json pieces = Json::array();
    for (const auto& f : v.G.pieces()) pieces.push_back(Json{{"grad", vec_json(f.gradient)}, {"const", to_json(f.constant)}});
    return Json{{"label", v.label}, {"A", to_json(v.A)}, {"G", Json{{"pieces", pieces}}}};
}

std::vector<ValuationModel> family_from(const Json& j) {
    const Json* list = &j;
    if (j.is_object() && j.contains("valuations")) list = &j["valuations"];
    std::vector<ValuationModel> out;
    if (list->is_array()) {
        for (const auto& v : *list) out.push_back(valuation_from(v));
    } else {
        out.push_back(valuation_from(*list));
    }
    if (out.empty()) throw InputError("the valuation family is empty");
    return out;
}

SweepSpec sweep_from(const Json& j, SweepSpec s) {
    if (!j.is_object()) throw InputError("sweep spec must be an object");
    if (j.contains("tau")) s.tau = rat_from(j["tau"]);
    if (j.contains("m_rule")) {
        if (!j["m_rule"].is_string()) throw InputError("m_rule must be a string");
        s.m_rule = j["m_rule"].get<std::string>();
        MRule::parse(s.m_rule);
    }
    if (j.contains("k_range")) {
        auto r = ints_from(j["k_range"], "k_range");
        if (r.size() != 2) throw InputError("k_range must be [k_min, k_max]");
        s.range = {r[0], r[1]};
    }
    s.range.validate();
    return s;
}

Json to_json(const SweepReport& r) {
    Json out;
    out["name"] = r.name;
    out["passed"] = r.passed();
    Json grid = Json::object();
    for (const auto& [k, v] : r.grid) grid[k] = v;
    out["grid"] = grid;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json cj{{"assertion", c.assertion}, {"trials", c.trials}, {"failures", c.failures}, {"passed", c.passed()}};
        if (!c.passed()) cj["witness"] = c.witness;
        checks.push_back(cj);
    }
    out["assertions"] = checks;
    Json fitted = Json::object();
    for (const auto& [k, v] : r.fitted) fitted[k] = to_json(v);
    out["fitted_constants"] = fitted;
    if (r.rate) {
        Json e;
        if (r.rate->exact())
            e["approx"] = "-inf";
        else
            e["approx"] = r.rate->exponent;
        e["residual"] = r.rate->residual;
        e["samples"] = r.rate->used;
        out["exponent"] = e;
    } else {
        out["exponent"] = nullptr;
    }
    out["columns"] = r.columns;
    out["rows"] = r.rows;
    return out;
}

}  // namespace okb::io
