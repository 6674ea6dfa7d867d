#include "okb/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "okb/errors.hpp"
#include "parallel.hpp"

namespace okb {

using detail::parallel_map;

// ---- report plumbing ----

bool RateFit::exact() const { return std::isinf(exponent) && exponent < 0; }

void SweepReport::record(const std::string& assertion, bool ok, const std::function<std::string()>& witness) {
    auto it = std::find_if(checks.begin(), checks.end(), [&](const Check& c) { return c.assertion == assertion; });
    if (it == checks.end()) {
        checks.push_back({assertion, 0, 0, {}});
        it = std::prev(checks.end());
    }
    ++it->trials;
    if (!ok) {
        if (it->failures == 0) it->witness = witness();
        ++it->failures;
    }
}

void SweepReport::fit(const std::string& key, const Rat& value) {
    for (auto& [k, v] : fitted)
        if (k == key) {
            v = value;
            return;
        }
    fitted.emplace_back(key, value);
}

const Check* SweepReport::find(const std::string& assertion) const {
    for (const auto& c : checks)
        if (c.assertion == assertion) return &c;
    return nullptr;
}

const Rat* SweepReport::fitted_value(const std::string& key) const {
    for (const auto& [k, v] : fitted)
        if (k == key) return &v;
    return nullptr;
}

bool SweepReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

std::string SweepReport::csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

void SweepReport::absorb(const SweepReport& other) {
    for (const auto& c : other.checks) {
        Check copy = c;
        if (!other.name.empty()) copy.assertion = other.name + ": " + c.assertion;
        auto it = std::find_if(checks.begin(), checks.end(),
                               [&](const Check& x) { return x.assertion == copy.assertion; });
        if (it == checks.end()) {
            checks.push_back(std::move(copy));
        } else {
            it->trials += copy.trials;
            if (it->failures == 0 && copy.failures > 0) it->witness = copy.witness;
            it->failures += copy.failures;
        }
    }
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

void KRange::validate() const {
    if (k_min < 1 || k_max < k_min) throw InputError("k range must satisfy 1 <= k_min <= k_max");
}

bool check_two_halves(SweepReport& R, const std::string& assertion, const KRange& range,
                      const std::vector<std::pair<std::int64_t, Rat>>& values) {
    Rat lower = 0, upper = 0;
    std::int64_t k_upper = 0;
    for (const auto& [k, v] : values) {
        if (range.upper(k)) {
            if (v > upper) {
                upper = v;
                k_upper = k;
            }
        } else if (v > lower) {
            lower = v;
        }
    }
    const bool ok = upper <= 2 * lower;
    R.record(assertion, ok, [&] {
        return "sup over upper half " + to_string(upper) + " at k=" + std::to_string(k_upper) +
               " exceeds twice the lower-half sup " + to_string(lower);
    });
    return ok;
}

RateFit rate_fit_errors(const std::vector<std::pair<std::int64_t, double>>& errors) {
    if (errors.size() < 4) throw DomainError("rate_fit needs at least 4 samples");
    std::vector<double> xs, ys;
    for (const auto& [k, e] : errors) {
        if (k < 1) throw DomainError("rate_fit needs positive k");
        const double a = std::abs(e);
        if (a == 0) continue;
        xs.push_back(std::log(static_cast<double>(k)));
        ys.push_back(std::log(a));
    }
    RateFit fit;
    if (xs.empty()) {
        fit.exponent = -std::numeric_limits<double>::infinity();
        return fit;
    }
    if (xs.size() < 3) throw DomainError("rate_fit needs at least 3 samples away from the limit");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw DomainError("rate_fit needs at least two distinct k");
    fit.exponent = sxy / sxx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + fit.exponent * (xs[i] - mx));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.used = xs.size();
    return fit;
}

RateFit rate_fit(const std::vector<std::pair<std::int64_t, Rat>>& samples, const Rat& limit) {
    std::vector<std::pair<std::int64_t, double>> errors;
    for (const auto& [k, v] : samples) errors.emplace_back(k, Rat(v - limit).get_d());
    // exact zeros stay zero; tiny nonzero rationals must not underflow to 0
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].second != limit && errors[i].second == 0) errors[i].second = std::numeric_limits<double>::min();
    return rate_fit_errors(errors);
}

// ---- samplers ----

namespace {

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

Rat random_unit(std::mt19937_64& rng, long den) { return make_rat(static_cast<long>(draw(rng, den + 1)), den); }

// random point of K as a convex combination of its vertices
Point random_point_in(const ConvexBody& K, std::mt19937_64& rng) {
    const auto& V = K.vertices();
    std::vector<Rat> w(V.size());
    Rat total = 0;
    for (auto& x : w) {
        x = Rat(static_cast<long>(1 + draw(rng, 64)));
        total += x;
    }
    Point p(K.dim(), Rat(0));
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) p[j] += w[i] / total * V[i][j];
    return p;
}

Rat power(const Rat& x, std::size_t e) { return pow(x, static_cast<unsigned>(e)); }

Rat ratio(std::int64_t a, std::int64_t b) { return make_rat(static_cast<long>(a), static_cast<long>(b)); }

Rat rat_of(std::int64_t a) { return Rat(static_cast<long>(a)); }

HalfSpace p1_at_least(std::size_t n, const Rat& t) {
    Vec normal(n, Rat(0));
    normal[0] = -1;
    return {normal, -t};
}

ConvexBody p1_level(const ConvexBody& B, const Rat& t) {
    Vec normal(B.dim(), Rat(0));
    normal[0] = 1;
    return intersect(B, {HalfSpace{normal, t}, p1_at_least(B.dim(), t)});
}

}  // namespace

std::vector<ConvexBody> sample_sub_bodies(const ConvexBody& K, const Rat& nu, std::size_t N, std::uint64_t seed) {
    if (!K.full_dimensional()) throw DomainError("the container body must be full-dimensional");
    if (nu <= 0 || nu > volume(K)) throw DomainError("nu must lie in (0, |K|]");
    std::mt19937_64 rng(seed);
    const std::size_t n = K.dim();
    std::vector<std::pair<Rat, Rat>> box;
    for (std::size_t i = 0; i < n; ++i) box.push_back(range_of(K, AffineFunctional::coordinate(n, i)));
    std::vector<ConvexBody> out;
    std::size_t attempts = 0;
    while (out.size() < N) {
        if (++attempts > 1000 * (N + 1)) throw DomainError("could not sample sub-bodies of the requested volume");
        ConvexBody P = ConvexBody::empty(n);
        if (out.size() % 4 == 3) {
            std::vector<HalfSpace> hs;
            for (std::size_t i = 0; i < n; ++i) {
                Rat a = box[i].first + (box[i].second - box[i].first) * random_unit(rng, 32);
                Rat b = box[i].first + (box[i].second - box[i].first) * random_unit(rng, 32);
                if (b < a) std::swap(a, b);
                Vec e(n, Rat(0));
                e[i] = 1;
                hs.push_back({e, b});
                e[i] = -1;
                hs.push_back({e, -a});
            }
            P = intersect(K, hs);
        } else {
            std::vector<Point> pts;
            const std::size_t m = n + 1 + draw(rng, 6);
            for (std::size_t i = 0; i < m; ++i) pts.push_back(random_point_in(K, rng));
            P = ConvexBody::hull(pts);
        }
        if (P.full_dimensional() && volume(P) >= nu) out.push_back(std::move(P));
    }
    return out;
}

std::vector<ConvexBody> sample_polytopes(std::size_t n, std::size_t N, std::uint64_t seed, long den) {
    if (n == 0 || den < 1) throw InputError("sample_polytopes needs n >= 1 and den >= 1");
    std::mt19937_64 rng(seed);
    std::vector<ConvexBody> out;
    while (out.size() < N) {
        std::vector<Point> pts;
        const std::size_t m = n + 1 + draw(rng, 5);
        for (std::size_t i = 0; i < m; ++i) {
            Point p;
            for (std::size_t j = 0; j < n; ++j) p.push_back(random_unit(rng, den));
            pts.push_back(std::move(p));
        }
        ConvexBody B = ConvexBody::hull(pts);
        if (B.full_dimensional()) out.push_back(std::move(B));
    }
    return out;
}

ConcavePL sample_concave(const ConvexBody& P, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = P.dim();
    std::vector<AffineFunctional> pieces;
    const std::size_t count = 1 + draw(rng, 3);
    for (std::size_t i = 0; i < count; ++i) {
        Vec g;
        for (std::size_t j = 0; j < n; ++j) g.push_back(rat_of(static_cast<std::int64_t>(draw(rng, 5)) - 2));
        pieces.push_back({g, random_unit(rng, 8) * 2});
    }
    ConcavePL G(pieces);
    const Rat shift = random_unit(rng, 8) - minimize(P, G);
    for (auto& p : pieces) p.constant += shift;
    return ConcavePL(pieces);
}

EllRule EllRule::parse(const std::string& s) {
    EllRule r;
    if (s == "k") r.kind = Kind::K;
    else if (s == "ceil_half") r.kind = Kind::CeilHalf;
    else if (s == "ceil_sqrt") r.kind = Kind::CeilSqrt;
    else if (s.rfind("ceil_frac:", 0) == 0) {
        r.kind = Kind::CeilFrac;
        r.c = parse_rat(s.substr(10));
        if (r.c <= 0 || r.c > 1) throw InputError("ceil_frac constant must lie in (0,1]");
    } else {
        throw InputError("unknown ell rule '" + s + "'");
    }
    return r;
}

std::string EllRule::name() const {
    switch (kind) {
        case Kind::K: return "k";
        case Kind::CeilHalf: return "ceil_half";
        case Kind::CeilSqrt: return "ceil_sqrt";
        case Kind::CeilFrac: return "ceil_frac:" + to_string(c);
    }
    return "?";
}

std::int64_t EllRule::eval(std::int64_t k) const {
    Int l;
    switch (kind) {
        case Kind::K: l = k; break;
        case Kind::CeilHalf: l = (k + 1) / 2; break;
        case Kind::CeilSqrt: {
            l = sqrt(Int(static_cast<long>(k)));
            if (l * l < k) ++l;
            break;
        }
        case Kind::CeilFrac: l = ceil_of(c * rat_of(k)); break;
    }
    return std::clamp<std::int64_t>(to_i64(l), 1, k);
}

// ---- lattice sweeps ----

SweepReport verify_uniform_ehrhart(const ConvexBody& K, const std::vector<ConvexBody>& bodies, const Rat& nu,
                                   const KRange& range, unsigned jobs) {
    range.validate();
    if (bodies.empty()) throw DomainError("no sub-bodies to test");
    const std::size_t n = K.dim();
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        const auto& P = bodies[i];
        if (P.dim() != n) throw InputError("sub-body dimension mismatch");
        for (const auto& v : P.vertices())
            if (!K.contains(v)) throw DomainError("sub-body " + std::to_string(i) + " is not contained in K");
        if (volume(P) < nu) throw DomainError("sub-body " + std::to_string(i) + " has volume below nu");
    }
    SweepReport R;
    R.name = "ehrhart";
    R.grid = {{"nu", to_string(nu)}, {"bodies", std::to_string(bodies.size())},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "max_disc_over_k^(n-1)", "argmax_body"};
    const std::size_t K_count = static_cast<std::size_t>(range.k_max - range.k_min + 1);
    struct Row {
        Rat value;
        std::size_t arg = 0;
    };
    auto rows = parallel_map<Row>(K_count, jobs, [&](std::size_t i) {
        const std::int64_t k = range.k_min + static_cast<std::int64_t>(i);
        const Rat scale = power(rat_of(k), n - 1);
        Row row{Rat(-1), 0};
        for (std::size_t b = 0; b < bodies.size(); ++b) {
            Rat d = discrepancy(bodies[b], k);
            if (d < 0) d = -d;
            d /= scale;
            if (d > row.value) row = {d, b};
        }
        return row;
    });
    std::vector<std::pair<std::int64_t, Rat>> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::int64_t k = range.k_min + static_cast<std::int64_t>(i);
        values.emplace_back(k, rows[i].value);
        R.rows.push_back({std::to_string(k), to_string(rows[i].value), std::to_string(rows[i].arg)});
    }
    check_two_halves(R, "max_P |disc(P,k)|/k^(n-1) stable across halves", range, values);
    Rat sup = 0;
    for (auto& [k, v] : values) sup = std::max(sup, v);
    R.fit("sup_M", sup);
    return R;
}

SweepReport verify_lower_bound_constant(const ConvexBody& P, const KRange& range) {
    range.validate();
    if (!P.full_dimensional()) throw DomainError("lower-bound check needs a full-dimensional body");
    const std::size_t n = P.dim();
    const Rat vol = volume(P);
    const Rat r = chebyshev_ball(P).radius_lb;
    const Rat n3 = power(rat_of(static_cast<std::int64_t>(n)), 3);
    SweepReport R;
    R.name = "lowerbound";
    R.grid = {{"n", std::to_string(n)}, {"volume", to_string(vol)}, {"r_lb", to_string(r)}};
    R.columns = {"k", "count", "volume*k^n", "applicable"};
    R.fit("r_lb", r);
    R.fit("C_ub", lower_bound_constant_ub(n, r));
    for (std::int64_t k = range.k_min; k <= range.k_max; ++k) {
        const Rat rk2 = 2 * r * rat_of(k);
        const bool applicable = rk2 * rk2 > n3;  // k > n^{3/2}/(2r)
        const std::int64_t c = count(P, k);
        const Rat main = vol * power(rat_of(k), n);
        R.rows.push_back({std::to_string(k), std::to_string(c), to_string(main), applicable ? "1" : "0"});
        if (!applicable) continue;
        // c >= (1 - sqrt(n^3)/(2rk)) main  <=>  (main - c) 2rk <= sqrt(n^3) main
        const Rat deficit = (main - rat_of(c)) * rk2;
        const bool ok = deficit <= 0 || deficit * deficit <= n3 * main * main;
        R.record("count >= (1 - n^(3/2)/(2 r k)) |P| k^n", ok, [&] {
            return "k=" + std::to_string(k) + " count=" + std::to_string(c) + " |P|k^n=" + to_string(main) +
                   " r_lb=" + to_string(r) + " body vertices " + std::to_string(P.vertices().size());
        });
    }
    return R;
}

SweepReport verify_lower_bound_suite(std::size_t n_max, std::size_t N, std::uint64_t seed, const KRange& range,
                                     unsigned jobs) {
    if (n_max < 1) throw InputError("n_max must be positive");
    std::vector<ConvexBody> bodies;
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t n = 1 + i % n_max;
        bodies.push_back(sample_polytopes(n, 1, seed + i, 12).front());
    }
    auto reports = parallel_map<SweepReport>(bodies.size(), jobs,
                                             [&](std::size_t i) { return verify_lower_bound_constant(bodies[i], range); });
    SweepReport R;
    R.name = "lowerbound";
    R.grid = {{"bodies", std::to_string(N)}, {"n_max", std::to_string(n_max)}, {"seed", std::to_string(seed)},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"body", "n", "volume", "r_lb", "applicable_k"};
    for (std::size_t i = 0; i < reports.size(); ++i) {
        auto& rep = reports[i];
        std::int64_t applicable = 0;
        for (auto& row : rep.rows) applicable += row[3] == "1";
        R.rows.push_back({std::to_string(i), std::to_string(bodies[i].dim()), to_string(volume(bodies[i])),
                          to_string(*rep.fitted_value("r_lb")), std::to_string(applicable)});
        for (auto& c : rep.checks) {
            Check copy = c;
            if (!copy.witness.empty()) copy.witness = "body " + std::to_string(i) + ": " + copy.witness;
            auto it = std::find_if(R.checks.begin(), R.checks.end(),
                                   [&](const Check& x) { return x.assertion == copy.assertion; });
            if (it == R.checks.end()) {
                R.checks.push_back(copy);
            } else {
                it->trials += copy.trials;
                if (it->failures == 0 && copy.failures) it->witness = copy.witness;
                it->failures += copy.failures;
            }
        }
    }
    return R;
}

SweepReport verify_concave_sum_bound(const std::vector<std::pair<ConvexBody, ConcavePL>>& samples,
                                     const KRange& range, unsigned jobs) {
    range.validate();
    if (samples.empty()) throw DomainError("no samples");
    struct Prep {
        Rat integral, sup;
    };
    std::vector<Prep> prep;
    for (const auto& [P, G] : samples) {
        if (!nonnegative_on(G, P)) throw DomainError("sampled G is negative on its body");
        prep.push_back({integrate(P, G), maximize(P, G).first});
    }
    SweepReport R;
    R.name = "concave";
    R.grid = {{"samples", std::to_string(samples.size())},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "max_(sum-integral)*k/supG", "argmax_sample"};
    struct Row {
        Rat value;
        std::size_t arg = 0;
    };
    const std::size_t count_k = static_cast<std::size_t>(range.k_max - range.k_min + 1);
    auto rows = parallel_map<Row>(count_k, jobs, [&](std::size_t i) {
        const std::int64_t k = range.k_min + static_cast<std::int64_t>(i);
        Row row{Rat(-1), 0};
        for (std::size_t s = 0; s < samples.size(); ++s) {
            if (prep[s].sup == 0) continue;
            Rat e = (concave_sum(samples[s].first, samples[s].second, k) - prep[s].integral) * rat_of(k) / prep[s].sup;
            if (e < 0) e = -e;
            if (e > row.value) row = {e, s};
        }
        return row;
    });
    std::vector<std::pair<std::int64_t, Rat>> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::int64_t k = range.k_min + static_cast<std::int64_t>(i);
        values.emplace_back(k, rows[i].value);
        R.rows.push_back({std::to_string(k), to_string(rows[i].value), std::to_string(rows[i].arg)});
    }
    check_two_halves(R, "|sum - integral| k / sup G stable across halves", range, values);
    return R;
}

SweepReport verify_cone_counts(const ConvexBody& B, const Rat& a, const Rat& b, const std::optional<Point>& V,
                               const EllRule& ell, const KRange& range) {
    range.validate();
    const std::size_t n = B.dim();
    const ConvexBody cone = V ? apex_cone(B, a, b, *V) : slice_cone(B, a, b);
    if (!cone.full_dimensional()) throw DomainError("the cone is not full-dimensional");
    const std::size_t iota = V ? 0 : p1_level(B, b).affine_dim();
    const Rat vol = volume(cone);
    const Rat C = lower_bound_constant_ub(n, chebyshev_ball(cone).radius_lb);
    const Rat C1 = 2 * C, C2 = vol / 2;
    SweepReport R;
    R.name = V ? "cones" : "slicecones";
    R.grid = {{"a", to_string(a)}, {"b", to_string(b)}, {"ell", ell.name()}, {"iota", std::to_string(iota)},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    if (V) R.grid.emplace_back("V", to_string(*V));
    R.columns = {"k", "ell", "t", "count", "shifted_lb", "C2*ell^n"};
    R.fit("C1", C1);
    R.fit("C2", C2);
    std::vector<std::pair<std::int64_t, Rat>> inverse_ratio;
    Rat min_ratio = -1;
    for (std::int64_t k = range.k_min; k <= range.k_max; ++k) {
        const std::int64_t l = ell.eval(k);
        const Rat t = b - ratio(l, k) * (b - a);
        const ConvexBody sub = intersect_halfspace(cone, p1_at_least(n, t));
        const std::int64_t c = sub.is_empty() ? 0 : count(sub, k);
        std::string lb_text = "-", c2_text = "-";
        if (V) {
            const auto lb = shifted_min_count(cone, l, ShiftStrategy::analytic()).analytic_lb;
            lb_text = lb.get_str();
            R.record("count(C(t),k) >= certified min over shifts of count(C+x, ell)", Int(static_cast<long>(c)) >= lb,
                     [&] { return "k=" + std::to_string(k) + " ell=" + std::to_string(l) + " count=" +
                                  std::to_string(c) + " lb=" + lb.get_str(); });
            if (rat_of(l) > C1) {
                const Rat need = C2 * power(rat_of(l), n);
                c2_text = to_string(need);
                R.record("count(C(t),k) >= C2 ell^n for ell > C1", rat_of(c) >= need, [&] {
                    return "k=" + std::to_string(k) + " ell=" + std::to_string(l) + " count=" + std::to_string(c) +
                           " C2*ell^n=" + to_string(need);
                });
            }
        } else {
            // the count only has to be of order k^iota ell^(n-iota) once ell > C1
            if (rat_of(l) > C1) {
                const Rat scale = power(rat_of(k), iota) * power(rat_of(l), n - iota);
                const Rat r = rat_of(c) / scale;
                if (min_ratio < 0 || r < min_ratio) min_ratio = r;
                R.record("slice-cone count positive for ell > C1", c > 0, [&] { return "k=" + std::to_string(k); });
                if (c > 0) inverse_ratio.emplace_back(k, scale / rat_of(c));
            }
        }
        R.rows.push_back({std::to_string(k), std::to_string(l), to_string(t), std::to_string(c), lb_text, c2_text});
    }
    if (!V) {
        // halves of the sub-range where ell > C1
        if (inverse_ratio.size() >= 2)
            check_two_halves(R, "k^iota ell^(n-iota)/count stable across halves",
                             KRange{inverse_ratio.front().first, range.k_max}, inverse_ratio);
        if (min_ratio >= 0) R.fit("C2_fitted", min_ratio);
    }
    return R;
}

// ---- series sweeps ----

SweepReport verify_maxp1(const GradedSeriesModel& M, const KRange& range) {
    range.validate();
    const ConvexBody& D = M.ambient();
    const std::size_t n = M.dim();
    const auto p1 = AffineFunctional::coordinate(n, 0);
    const Rat top = range_of(D, p1).second;
    const std::size_t iota = p1_level(D, top).affine_dim();
    SweepReport R;
    R.name = "maxp1";
    R.grid = {{"model", M.label}, {"iota", std::to_string(iota)},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "max_Delta_p1", "max_Delta_k_p1", "difference", "plus_count", "C^n_needed"};
    std::vector<std::pair<std::int64_t, Rat>> needed, improved_inv;
    Rat C_n = 0;
    std::optional<Rat> improved;
    for (std::int64_t k = range.k_min; k <= range.k_max; ++k) {
        if (!M.in_levels(k)) continue;
        const auto st = max_gap_stat(M, k);
        const Rat& diff = st.difference;
        R.record("max_Delta p1 - max_Delta_k p1 >= 0", diff >= 0,
                 [&] { return "k=" + std::to_string(k) + " difference=" + to_string(diff); });
        const ConvexBody plus_body = superlevel(D, ConcavePL(p1), st.discrete_max + make_rat(1, 2 * static_cast<long>(k)));
        const std::int64_t plus = plus_body.is_empty() ? 0 : count(plus_body, k);
        std::string need_text = "0";
        if (diff > 0) {
            R.record("plus-body has lattice points when the difference is positive", plus > 0,
                     [&] { return "k=" + std::to_string(k) + " difference=" + to_string(diff); });
            if (plus > 0) {
                // diff <= C plus^{1/n}/k  <=>  C^n >= (diff k)^n / plus
                const Rat need = power(diff * rat_of(k), n) / rat_of(plus);
                need_text = to_string(need);
                needed.emplace_back(k, need);
                C_n = std::max(C_n, need);
                // plus >= C diff^{n-iota} k^n
                const Rat r = rat_of(plus) / (power(diff, n - iota) * power(rat_of(k), n));
                improved = improved ? std::min(*improved, r) : r;
                improved_inv.emplace_back(k, 1 / r);
            }
        } else {
            needed.emplace_back(k, Rat(0));
        }
        R.rows.push_back({std::to_string(k), to_string(top), to_string(st.discrete_max), to_string(diff),
                          std::to_string(plus), need_text});
    }
    R.fit("C^n", C_n);
    if (improved) R.fit("improved_C", *improved);
    check_two_halves(R, "(difference k)^n / plus-count stable across halves", range, needed);
    if (!improved_inv.empty())
        check_two_halves(R, "difference^(n-iota) k^n / plus-count stable across halves", range, improved_inv);
    return R;
}

namespace {

struct LevelData {
    std::int64_t k = 0, d = 0, D = 0, m = 0;
    std::vector<Rat> j, i;  // jumping and idealized jumping numbers
    Rat S, Sbar;
};

Rat prefix_average(const std::vector<Rat>& v, std::size_t from, std::size_t count, std::int64_t k) {
    Rat sum = 0;
    for (std::size_t l = from; l < from + count; ++l) sum += v[l];
    return sum / (rat_of(k) * rat_of(static_cast<std::int64_t>(count)));
}

std::vector<std::int64_t> levels_in(const GradedSeriesModel& M, const KRange& range) {
    std::vector<std::int64_t> out;
    for (std::int64_t k = range.k_min; k <= range.k_max; ++k)
        if (M.in_levels(k)) out.push_back(k);
    if (out.empty()) throw DomainError("no levels of the model fall in the k range");
    return out;
}

}  // namespace

SweepReport verify_S_two_sided(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau,
                               const MRule& rule, const KRange& range, const Rat& tol, unsigned jobs) {
    range.validate();
    if (tau < 0 || tau > 1) throw DomainError("tau must lie in [0,1]");
    validate(M, v);
    const std::size_t n = M.dim();
    const Interval St = S_tau(M, v, tau, tol);
    const Rat S0 = S0_and_sigma(M, v).S0;
    const TailSpec Q = tau > 0 ? quantile(M, v, tau, tol) : TailSpec{tau, S0, S0, Rat(0)};
    const ConvexBody tail = superlevel(M.ambient(), v.G, Q.lo);
    const auto ks = levels_in(M, range);

    auto data = parallel_map<LevelData>(ks.size(), jobs, [&](std::size_t idx) {
        LevelData L;
        L.k = ks[idx];
        L.j = jumping_numbers(M, v, L.k).values;
        L.i = idealized_jumping(M, v, L.k).values;
        L.d = static_cast<std::int64_t>(L.j.size());
        L.D = static_cast<std::int64_t>(L.i.size());
        L.m = rule.eval(L.d, L.k, n, tau);
        L.S = prefix_average(L.j, 0, static_cast<std::size_t>(L.m), L.k);
        L.Sbar = prefix_average(L.i, 0, static_cast<std::size_t>(L.m), L.k);
        return L;
    });

    SweepReport R;
    R.name = "stwosided";
    R.grid = {{"model", M.label}, {"valuation", v.label}, {"tau", to_string(tau)}, {"m_rule", rule.name()},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "d_k", "m_k", "S_km", "Sbar_km", "S_tau_lo", "S_tau_hi", "C_upper_needed", "C_lower_needed"};
    std::vector<std::pair<std::int64_t, Rat>> upper, lower;
    std::vector<std::pair<std::int64_t, double>> errors;
    std::vector<std::pair<std::int64_t, Rat>> exact_samples;
    for (const auto& L : data) {
        const Rat K = rat_of(L.k), d = rat_of(L.d), m = rat_of(L.m);
        // weak reverse inequality: S_{k,m} >= (1/km) sum_{l=1+D-d}^{m+D-d} i_{k,l}
        const Rat weak = prefix_average(L.i, static_cast<std::size_t>(L.D - L.d), static_cast<std::size_t>(L.m), L.k);
        R.record("S_km >= (1/km) sum_{l=1+D-d}^{m+D-d} i_kl", L.S >= weak, [&] {
            return "k=" + std::to_string(L.k) + " m=" + std::to_string(L.m) + " S=" + to_string(L.S) +
                   " rhs=" + to_string(weak);
        });
        R.record("S_km <= Sbar_km", L.S <= L.Sbar, [&] {
            return "k=" + std::to_string(L.k) + " S=" + to_string(L.S) + " Sbar=" + to_string(L.Sbar);
        });
        if (Q.exact() && !tail.is_empty()) {
            const std::int64_t Mk = count(tail, L.k);
            if (Mk >= 1 && Mk <= L.D) {
                const Rat SbarM = prefix_average(L.i, 0, static_cast<std::size_t>(Mk), L.k);
                const Rat q = rat_of(Mk) / m;
                const bool ok = std::min(Rat(1), q) * SbarM <= L.Sbar && L.Sbar <= std::max(Rat(1), q) * SbarM;
                R.record("min{1,M_k/m_k} Sbar_kM <= Sbar_km <= max{1,M_k/m_k} Sbar_kM", ok, [&] {
                    return "k=" + std::to_string(L.k) + " M_k=" + std::to_string(Mk) + " m_k=" + std::to_string(L.m);
                });
            }
        }
        const Rat up_factor = tau > 0 ? std::max(Rat(tau * d / m), Rat(1)) : Rat(1);
        const Rat low_factor = tau > 0 ? std::min(Rat(tau * d / m), Rat(1)) : Rat(1);
        std::string cu = "-", cl = "-";
        if (St.lo > 0) {
            Rat c = K * (L.S / (up_factor * St.lo) - 1);
            if (c < 0) c = 0;
            cu = to_string(c);
            upper.emplace_back(L.k, c);
        }
        if (tau > 0) {
            Rat c = K * (1 - L.S / (low_factor * St.hi));
            if (c < 0) c = 0;
            cl = to_string(c);
            lower.emplace_back(L.k, c);
        } else {
            // S >= (1 - C max{m/d, 1/k}^{1/n}) S0  <=>  C^n >= (1 - S/S0)^n / max{m/d, 1/k}
            Rat gap = S0 > 0 ? Rat(1 - L.S / S0) : Rat(0);
            if (gap < 0) gap = 0;
            const Rat c = power(gap, n) / std::max(Rat(m / d), Rat(1 / K));
            cl = to_string(c);
            lower.emplace_back(L.k, c);
        }
        R.rows.push_back({std::to_string(L.k), std::to_string(L.d), std::to_string(L.m), to_string(L.S),
                          to_string(L.Sbar), to_string(St.lo), to_string(St.hi), cu, cl});
        if (St.exact())
            exact_samples.emplace_back(L.k, L.S);
        else
            errors.emplace_back(L.k, Rat(L.S - St.mid()).get_d());
    }
    Rat max_up = 0, max_low = 0;
    for (auto& [k, c] : upper) max_up = std::max(max_up, c);
    for (auto& [k, c] : lower) max_low = std::max(max_low, c);
    R.fit("C_upper", max_up);
    R.fit(tau > 0 ? "C_lower" : "C_lower^n", max_low);
    R.fit("S_tau_lo", St.lo);
    R.fit("S_tau_hi", St.hi);
    check_two_halves(R, "upper-bound constant stable across halves", range, upper);
    check_two_halves(R, "lower-bound constant stable across halves", range, lower);
    if (ks.size() >= 4) R.rate = St.exact() ? rate_fit(exact_samples, St.lo) : rate_fit_errors(errors);
    return R;
}

SweepReport verify_delta_rate(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                              const Rat& tau, const MRule& rule, const KRange& range, const Rat& tol,
                              unsigned jobs) {
    range.validate();
    if (family.empty()) throw DomainError("the valuation family is empty");
    if (tau < 0 || tau > 1) throw DomainError("tau must lie in [0,1]");
    const std::size_t n = M.dim();
    const RestrictedThreshold dt = delta_tau_restricted(M, family, tau, tol);
    if (dt.infinite) throw DomainError("delta_tau is infinite on this family");
    const auto ks = levels_in(M, range);
    struct Row {
        std::int64_t k, d, m;
        RestrictedThreshold delta;
    };
    auto rows = parallel_map<Row>(ks.size(), jobs, [&](std::size_t idx) {
        const std::int64_t k = ks[idx];
        const std::int64_t d = d_k(M, k);
        const std::int64_t m = rule.eval(d, k, n, tau);
        return Row{k, d, m, delta_km_restricted(M, family, k, m)};
    });
    SweepReport R;
    R.name = "deltarate";
    R.grid = {{"model", M.label}, {"family", std::to_string(family.size())}, {"tau", to_string(tau)},
              {"m_rule", rule.name()}, {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "d_k", "m_k", "delta_km", "argmin", "C_lower_needed", "C_upper_needed"};
    R.fit("delta_tau_lo", dt.lo);
    R.fit("delta_tau_hi", dt.hi);
    std::vector<std::pair<std::int64_t, Rat>> lower, upper, samples;
    std::vector<std::pair<std::int64_t, double>> errors;
    for (const auto& row : rows) {
        R.record("delta_km finite", !row.delta.infinite, [&] { return "k=" + std::to_string(row.k); });
        if (row.delta.infinite) continue;
        const Rat K = rat_of(row.k), d = rat_of(row.d), m = rat_of(row.m), dk = row.delta.lo;
        std::string cl, cu;
        if (tau > 0) {
            const Rat low_factor = std::min(Rat(m / (tau * d)), Rat(1));
            const Rat up_factor = std::max(Rat(tau * d / m), Rat(1));
            Rat a = K * (1 - dk / (low_factor * dt.hi));
            Rat b = K * (dt.hi / (up_factor * dk) - 1);
            if (a < 0) a = 0;
            if (b < 0) b = 0;
            lower.emplace_back(row.k, a);
            upper.emplace_back(row.k, b);
            cl = to_string(a);
            cu = to_string(b);
        } else {
            // |alpha_k - alpha| <= C k^{-1/n}  <=>  C^n >= |alpha_k - alpha|^n k
            Rat e = dk - dt.lo;
            if (e < 0) e = -e;
            const Rat c = power(e, n) * K;
            upper.emplace_back(row.k, c);
            cl = "-";
            cu = to_string(c);
        }
        R.rows.push_back({std::to_string(row.k), std::to_string(row.d), std::to_string(row.m), to_string(dk),
                          row.delta.argmin, cl, cu});
        if (dt.exact())
            samples.emplace_back(row.k, dk);
        else
            errors.emplace_back(row.k, Rat(dk - (dt.lo + dt.hi) / 2).get_d());
    }
    Rat max_low = 0, max_up = 0;
    for (auto& [k, c] : lower) max_low = std::max(max_low, c);
    for (auto& [k, c] : upper) max_up = std::max(max_up, c);
    if (tau > 0) {
        R.fit("C_lower", max_low);
        R.fit("C_upper", max_up);
        check_two_halves(R, "lower sandwich constant stable across halves", range, lower);
        check_two_halves(R, "upper sandwich constant stable across halves", range, upper);
    } else {
        R.fit("C_envelope^n", max_up);
        check_two_halves(R, "k^(-1/n) envelope constant stable across halves", range, upper);
    }
    if (samples.size() + errors.size() >= 4) R.rate = dt.exact() ? rate_fit(samples, dt.lo) : rate_fit_errors(errors);
    return R;
}

SweepReport verify_endpoint_limits(const GradedSeriesModel& M, const ValuationModel& v, const KRange& range,
                                   unsigned jobs) {
    range.validate();
    validate(M, v);
    const std::size_t n = M.dim();
    const Rat S0 = S0_and_sigma(M, v).S0;
    const Interval S1 = S_tau(M, v, 1);
    const auto ks = levels_in(M, range);
    auto profiles = parallel_map<std::vector<Rat>>(ks.size(), jobs, [&](std::size_t i) { return S_k_profile(M, v, ks[i]); });
    SweepReport R;
    R.name = "endpoints";
    R.grid = {{"model", M.label}, {"valuation", v.label},
              {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "d_k", "S_k1", "S_k_sqrt", "S_k_d_minus_sqrt", "S_k_d"};
    R.fit("S0", S0);
    R.fit("S1", S1.lo);
    const char* names[4] = {"m=1 -> S0", "m=ceil(sqrt d_k) -> S0", "m=d_k-ceil(sqrt d_k) -> S1", "m=d_k -> S1"};
    std::vector<std::pair<std::int64_t, Rat>> env[4];
    for (std::size_t idx = 0; idx < ks.size(); ++idx) {
        const std::int64_t k = ks[idx];
        const auto& S = profiles[idx];
        const std::int64_t d = static_cast<std::int64_t>(S.size());
        Int root = sqrt(Int(static_cast<long>(d)));
        if (root * root < d) ++root;
        const std::int64_t r = to_i64(root);
        const std::int64_t ms[4] = {1, std::min(r, d), std::max<std::int64_t>(1, d - r), d};
        std::vector<std::string> row{std::to_string(k), std::to_string(d)};
        for (int w = 0; w < 4; ++w) {
            const Rat& s = S[static_cast<std::size_t>(ms[w] - 1)];
            row.push_back(to_string(s));
            Rat c;
            if (w < 2) {
                // S0 - S <= C max{m/d, 1/k}^{1/n}
                const Rat e = S0 - s;
                c = power(e < 0 ? Rat(0) : e, n) / std::max(ratio(ms[w], d), ratio(1, k));
            } else {
                Rat e = s - (s > S1.hi ? S1.hi : s < S1.lo ? S1.lo : s);
                if (e < 0) e = -e;
                c = e / std::max(ratio(d - ms[w], d), ratio(1, k));
            }
            env[w].emplace_back(k, c);
        }
        R.rows.push_back(std::move(row));
    }
    for (int w = 0; w < 4; ++w) check_two_halves(R, std::string(names[w]) + " envelope stable across halves", range, env[w]);
    return R;
}

SweepReport verify_dkdk(const GradedSeriesModel& M, const KRange& range) {
    range.validate();
    const std::size_t n = M.dim();
    SweepReport R;
    R.name = "dkdk";
    R.grid = {{"model", M.label}, {"k_min", std::to_string(range.k_min)}, {"k_max", std::to_string(range.k_max)}};
    R.columns = {"k", "d_k", "D_k", "diff"};
    std::vector<std::pair<std::int64_t, Rat>> values;
    for (const auto& row : gap_table(M, range.k_max)) {
        if (row.k < range.k_min) continue;
        R.record("0 <= D_k - d_k", row.diff >= 0, [&] { return "k=" + std::to_string(row.k); });
        values.emplace_back(row.k, rat_of(row.diff) / power(rat_of(row.k), n - 1));
        R.rows.push_back({std::to_string(row.k), std::to_string(row.d), std::to_string(row.D), std::to_string(row.diff)});
    }
    check_two_halves(R, "(D_k - d_k)/k^(n-1) stable across halves", range, values);
    return R;
}

// ---- exact identities ----

SweepReport verify_counting_translation(std::size_t N, std::uint64_t seed, std::int64_t k_max, unsigned jobs) {
    if (k_max < 1) throw InputError("k_max must be positive");
    struct Trial {
        std::size_t n;
        std::int64_t k, l;
        bool counting, similarity, cone_count;
        std::string detail;
    };
    auto trials = parallel_map<Trial>(N, jobs, [&](std::size_t i) {
        const std::size_t n = 2 + i % 2;
        std::mt19937_64 rng(seed + 7919 * i);
        const ConvexBody B = sample_polytopes(n, 1, seed + i, 12).front();
        const std::int64_t k = 1 + static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(k_max)));
        const std::int64_t l = 1 + static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(k_max)));
        Trial t{n, k, l, false, true, true, {}};
        const std::int64_t lhs = count(B, k);
        const std::int64_t rhs = count(scale_translate(B, ratio(k, l), Point(n, Rat(0))), l);
        t.counting = lhs == rhs;
        if (!t.counting) t.detail = "count " + std::to_string(lhs) + " vs " + std::to_string(rhs);

        const auto p1 = AffineFunctional::coordinate(n, 0);
        const auto [lo, hi] = range_of(B, p1);
        Point V;
        for (const auto& v : B.vertices())
            if (v[0] == hi) V = v;
        const Rat a = lo + (hi - lo) * ratio(1 + static_cast<std::int64_t>(draw(rng, 3)), 5);
        const ConvexBody C = apex_cone(B, a, hi, V);
        // a random level plus the level t = b - (l'/k')(b-a) used by the count identity
        const std::int64_t kk = std::max(k, l), ll = std::min(k, l);
        const Rat t_count = hi - ratio(ll, kk) * (hi - a);
        const Rat t_rand = a + (hi - a) * ratio(1 + static_cast<std::int64_t>(draw(rng, 7)), 8);
        for (const Rat& level : {t_rand, t_count}) {
            if (level == hi) continue;
            Point shift = V;
            for (auto& x : shift) x *= (level - a) / (hi - level);
            const ConvexBody lhs_body =
                scale_translate(superlevel(C, ConcavePL(p1), level), (hi - a) / (hi - level), Point(n, Rat(0)));
            if (lhs_body != scale_translate(C, 1, shift)) {
                t.similarity = false;
                t.detail = "cone similarity fails at t=" + to_string(level);
            }
        }
        if (ll < kk) {
            Point shift = V;
            for (auto& x : shift) x *= ratio(kk - ll, ll);
            const std::int64_t c1 = count(superlevel(C, ConcavePL(p1), t_count), kk);
            const std::int64_t c2 = count(scale_translate(C, 1, shift), ll);
            t.cone_count = c1 == c2;
            if (!t.cone_count) t.detail = "cone count " + std::to_string(c1) + " vs " + std::to_string(c2);
        }
        return t;
    });
    SweepReport R;
    R.name = "counting";
    R.grid = {{"bodies", std::to_string(N)}, {"seed", std::to_string(seed)}, {"k_max", std::to_string(k_max)}};
    R.columns = {"trial", "n", "k", "ell", "counting", "similarity", "cone_count"};
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        auto witness = [&] {
            return "trial " + std::to_string(i) + " n=" + std::to_string(t.n) + " k=" + std::to_string(t.k) +
                   " ell=" + std::to_string(t.l) + ": " + t.detail;
        };
        R.record("count(K,k) = count((k/ell)K, ell)", t.counting, witness);
        R.record("rescaled sub-cone equals a translate of the apex cone", t.similarity, witness);
        R.record("count(C(t),k) = count(C + ((k-ell)/ell)V, ell)", t.cone_count, witness);
        R.rows.push_back({std::to_string(i), std::to_string(t.n), std::to_string(t.k), std::to_string(t.l),
                          t.counting ? "1" : "0", t.similarity ? "1" : "0", t.cone_count ? "1" : "0"});
    }
    return R;
}

namespace {

std::set<std::int64_t> numerators(const PointCloud& pc) {
    std::set<std::int64_t> out;
    for (const auto& p : pc.points) out.insert(p[0]);
    return out;
}

std::string join(const std::set<std::int64_t>& s) {
    std::string out;
    for (auto x : s) out += (out.empty() ? "" : " ") + std::to_string(x);
    return "{" + out + "}";
}

}  // namespace

SweepReport verify_weierstrass(int g_max, std::int64_t k_max) {
    if (g_max < 1 || k_max < 2) throw InputError("weierstrass sweep needs g_max >= 1 and k_max >= 2");
    SweepReport R;
    R.name = "weierstrass";
    R.grid = {{"g_max", std::to_string(g_max)}, {"k_max", std::to_string(k_max)}};
    R.columns = {"figure", "model", "k", "numerators"};

    // quartic curve, k = 1..5: the numerators k x of the points of Δ_k
    const std::map<std::vector<std::int64_t>, std::vector<std::set<std::int64_t>>> quartic{
        {{1, 2, 3}, {{1}, {2}, {3}, {4, 0}, {5, 1, 0}}},
        {{1, 2, 4}, {{1}, {2}, {3, 0}, {4, 1}, {5, 2, 0}}},
        {{1, 2, 5}, {{1}, {2}, {3, 0}, {4, 1, 0}, {5, 2, 1}}},
    };
    for (const auto& [gaps, rows] : quartic) {
        const auto M = models::quartic(gaps);
        for (std::int64_t k = 1; k <= 5; ++k) {
            const auto got = numerators(discrete_body(M, k));
            R.record("quartic Delta_k matches the figure", got == rows[static_cast<std::size_t>(k - 1)],
                     [&] { return M.label + " k=" + std::to_string(k) + " got " + join(got); });
            R.rows.push_back({"quartic", M.label, std::to_string(k), join(got)});
        }
    }

    // canonical series, g = 3: the missing numerators at k = 1, 2
    const std::map<std::string, std::pair<std::set<std::int64_t>, std::set<std::int64_t>>> canonical{
        {"generic", {{3, 4}, {6, 7, 8}}},    {"flex", {{2, 4}, {5, 7, 8}}},
        {"hyperflex", {{2, 3}, {3, 6, 7}}},  {"sextactic1", {{3, 4}, {5, 7, 8}}},
        {"sextactic2", {{3, 4}, {5, 6, 8}}}, {"sextactic3", {{3, 4}, {5, 6, 7}}},
    };
    for (const auto& [name, want] : canonical) {
        const auto M = models::canonical_panel(name);
        for (std::int64_t k : {1, 2}) {
            const auto got = numerators(gap_set(M, k));
            R.record("canonical gap set matches the figure", got == (k == 1 ? want.first : want.second),
                     [&] { return name + " k=" + std::to_string(k) + " got " + join(got); });
            R.rows.push_back({"canonical", M.label, std::to_string(k), join(got)});
        }
    }

    // P1 x P1: one missing point at k = 2
    for (bool ram : {false, true}) {
        const auto M = models::p1xp1(ram);
        const auto g2 = gap_set(M, 2);
        const IPoint want = ram ? IPoint{1, 1} : IPoint{1, 2};
        const bool ok = gap_set(M, 1).empty() && D_k(M, 1) == 4 && D_k(M, 2) == 10 && g2.size() == 1 &&
                        g2.points[0] == want;
        R.record("P1xP1 gap pattern matches the figure", ok, [&] { return M.label; });
        std::string pts;
        for (const auto& p : g2.points) pts += "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + ")";
        R.rows.push_back({"p1xp1", M.label, "2", pts});
    }

    // gap recovery on every numerical semigroup of genus <= g_max
    std::int64_t sequences = 0;
    for (int g = 1; g <= g_max; ++g) {
        for (const auto& gaps : numerical_semigroup_gaps(g)) {
            ++sequences;
            const auto M = GradedSeriesModel::curve(g, gaps);
            const auto rec = recover_gaps(M);
            bool ok = rec.size() == gaps.size();
            for (std::size_t i = 0; ok && i < gaps.size(); ++i) ok = rec[i].first == gaps[i] && rec[i].second == gaps[i];
            R.record("recover_gaps round-trips every gap sequence", ok, [&] {
                std::set<std::int64_t> s(gaps.begin(), gaps.end());
                return "g=" + std::to_string(g) + " gaps " + join(s);
            });
        }
    }
    R.fit("gap_sequences", rat_of(sequences));

    // canonical stabilization and the max-gap equality case
    for (int g = 2; g <= std::min(g_max, 6); ++g) {
        const auto M = models::canonical_generic(g);
        for (const auto& row : gap_table(M, k_max)) {
            const std::int64_t want = row.k == 1 ? g - 1 : g;
            R.record("canonical D_k - d_k = g (g-1 at k=1)", row.diff == want,
                     [&] { return "g=" + std::to_string(g) + " k=" + std::to_string(row.k) + " diff=" + std::to_string(row.diff); });
            const Rat bound = row.k == 1 ? rat_of(g - 1) : ratio(g, row.k);
            const auto st = max_gap_stat(M, row.k);
            R.record("generic pattern attains the max-gap bound", st.difference == bound,
                     [&] { return "g=" + std::to_string(g) + " k=" + std::to_string(row.k); });
        }
    }
    for (const auto& name : models::canonical_panel_names()) {
        const auto M = models::canonical_panel(name);
        for (std::int64_t k : {1, 2}) {
            const Rat bound = k == 1 ? Rat(2) : ratio(3, k);
            const auto st = max_gap_stat(M, k);
            std::set<std::int64_t> generic;
            for (std::int64_t j = 0; j < canonical_dk(3, k); ++j) generic.insert(j);
            const bool is_generic = numerators(discrete_body(M, k)) == generic;
            R.record("max-gap equality iff the generic pattern", st.difference <= bound && (st.difference == bound) == is_generic,
                     [&] { return name + " k=" + std::to_string(k) + " difference=" + to_string(st.difference); });
        }
    }
    return R;
}

// ---- suites over bundled models ----

namespace {

struct SuiteCase {
    GradedSeriesModel M;
    ValuationModel v;
};

std::vector<SuiteCase> suite_cases(std::int64_t k_max) {
    std::vector<SuiteCase> out;
    for (const auto& M : models::bundled(k_max)) {
        out.push_back({M, ValuationModel::divisorial(M.dim())});
        if (M.dim() != 2) continue;
        out.push_back({M, {"x2", Rat(1), ConcavePL(AffineFunctional::coordinate(2, 1))}});
        ValuationModel tent{"tent", Rat(2),
                            ConcavePL({AffineFunctional{{Rat(1), Rat(0)}, 0}, AffineFunctional{{Rat(-1), Rat(1)}, make_rat(3, 4)}})};
        if (nonnegative_on(tent.G, M.ambient())) out.push_back({M, tent});
    }
    return out;
}

// exact check that u^{1/p} is concave at a midpoint: u_m^{1/p} >= (u_a^{1/p} + u_b^{1/p})/2
bool root_midpoint_concave(const Rat& ua, const Rat& ub, const Rat& um, std::size_t p) {
    if (p == 1) return 2 * um >= ua + ub;
    if (p == 2) {
        const Rat lhs = 4 * um - ua - ub;
        return lhs >= 0 && lhs * lhs >= 4 * ua * ub;
    }
    return std::pow(um.get_d(), 1.0 / p) + 1e-12 >= (std::pow(ua.get_d(), 1.0 / p) + std::pow(ub.get_d(), 1.0 / p)) / 2;
}

SweepReport sandwich_case(const SuiteCase& c, std::int64_t k_max) {
    SweepReport R;
    const auto& M = c.M;
    const auto& v = c.v;
    const std::string tag = M.label + "/" + v.label;
    std::map<std::int64_t, std::vector<Rat>> S;
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 1; k <= k_max; ++k)
        if (M.in_levels(k)) ks.push_back(k);
    for (auto k : ks) {
        const auto j = jumping_numbers(M, v, k).values;
        const auto i = idealized_jumping(M, v, k).values;
        const std::size_t d = j.size(), D = i.size();
        bool lower = d <= D, tail = d <= D;
        for (std::size_t l = 0; lower && l < d; ++l) lower = j[l] <= i[l];
        for (std::size_t l = 0; tail && l < d; ++l) tail = j[d - 1 - l] >= i[D - 1 - l];
        auto where = [&] { return tag + " k=" + std::to_string(k); };
        R.record("j_kl <= i_kl", lower, where);
        R.record("j_(k,d+1-l) >= i_(k,D+1-l)", tail, where);
        auto prof = profile({k, j});
        const auto pbar = profile({k, i});
        bool mono = true;
        for (std::size_t m = 1; m < prof.size(); ++m) mono = mono && prof[m - 1] >= prof[m];
        for (std::size_t m = 1; m < pbar.size(); ++m) mono = mono && pbar[m - 1] >= pbar[m];
        R.record("S_km and Sbar_km non-increasing in m", mono, where);
        bool below = true;
        for (std::size_t m = 0; m < prof.size(); ++m) below = below && prof[m] <= pbar[m];
        R.record("S_km <= Sbar_km", below, where);
        S.emplace(k, std::move(prof));
    }
    for (auto k : ks) {
        const Rat K = rat_of(k);
        for (auto kp : ks) {
            if (kp < k || !S.count(k + kp)) continue;
            const Rat KP = rat_of(kp), KK = rat_of(k + kp);
            auto where = [&] { return tag + " k=" + std::to_string(k) + " k'=" + std::to_string(kp); };
            R.record("Fekete: k S_k1 + k' S_k'1 <= (k+k') S_(k+k')1", K * S[k][0] + KP * S[kp][0] <= KK * S[k + kp][0], where);
            bool joint = true;
            for (std::size_t m = 0; joint && m < S[k].size(); ++m)
                joint = KK * S[k + kp][m] >= K * S[k][m] + KP * S[kp][0];
            for (std::size_t m = 0; joint && m < S[kp].size(); ++m)
                joint = KK * S[k + kp][m] >= KP * S[kp][m] + K * S[k][0];
            R.record("joint superadditivity of S_km", joint, where);
        }
        for (std::int64_t l = 2; S.count(l * k); ++l) {
            bool ok = true;
            for (std::size_t m = 0; ok && m < S[k].size(); ++m) ok = S[k][m] <= S[l * k][m];
            R.record("S_km <= S_(lk)m", ok, [&] { return tag + " k=" + std::to_string(k) + " l=" + std::to_string(l); });
        }
    }

    // concavity statements about the limit body
    const auto& D = M.ambient();
    const std::size_t n = M.dim();
    const Rat vol = volume(D);
    const Rat S0 = S0_and_sigma(M, v).S0;
    for (long i = 0; i <= 12; ++i) {
        const Rat t = S0 * make_rat(i, 12);
        R.record("Fujita-Odaka: |{G >= t}| >= (1 - t/S0)^n |Delta|",
                 volume(superlevel(D, v.G, t)) >= power(1 - t / S0, n) * vol,
                 [&] { return tag + " t=" + to_string(t); });
    }
    if (v.label == "p1")
        R.record("S0 <= (n+1) S(v)", S0 <= rat_of(static_cast<std::int64_t>(n + 1)) * S_tau(M, v, 1).lo,
                 [&] { return tag; });
    for (long i = 0; i + 2 <= 16; ++i) {
        const Rat a = S0 * make_rat(i, 16), b = S0 * make_rat(i + 2, 16), m = (a + b) / 2;
        if (b >= S0) continue;
        R.record("t -> ccdf(t)^(1/n) concave",
                 root_midpoint_concave(ccdf_continuous(M, v, a), ccdf_continuous(M, v, b), ccdf_continuous(M, v, m), n),
                 [&] { return tag + " t=" + to_string(m); });
    }
    if (n >= 2 && v.label == "p1") {
        for (std::size_t axis = 0; axis < n; ++axis) {
            const auto f = AffineFunctional::coordinate(n, axis);
            const auto [lo, hi] = range_of(D, f);
            for (long i = 0; i + 2 <= 16; ++i) {
                const Rat a = lo + (hi - lo) * make_rat(i, 16), b = lo + (hi - lo) * make_rat(i + 2, 16);
                const Rat m = (a + b) / 2;
                R.record("Brunn: slice volume^(1/(n-1)) concave",
                         root_midpoint_concave(slice_volume(D, f, a), slice_volume(D, f, b), slice_volume(D, f, m), n - 1),
                         [&] { return tag + " axis=" + std::to_string(axis) + " t=" + to_string(m); });
            }
        }
    }
    R.rows.push_back({M.label, v.label, std::to_string(ks.size()), to_string(S0)});
    return R;
}

}  // namespace

SweepReport verify_sandwich_suite(std::int64_t k_max, unsigned jobs) {
    if (k_max < 1) throw InputError("k_max must be positive");
    const auto cases = suite_cases(k_max);
    auto parts = parallel_map<SweepReport>(cases.size(), jobs, [&](std::size_t i) { return sandwich_case(cases[i], k_max); });
    SweepReport R;
    R.name = "sandwich";
    R.grid = {{"models", std::to_string(cases.size())}, {"k_max", std::to_string(k_max)}};
    R.columns = {"model", "valuation", "levels", "S0"};
    for (const auto& p : parts) R.absorb(p);
    return R;
}

SweepReport verify_empirical_measure(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau,
                                     const std::vector<std::int64_t>& ks, double tolerance) {
    if (ks.size() < 2) throw InputError("need at least two levels");
    if (!(tau > 0 && tau <= 1)) throw DomainError("tau must lie in (0,1]");
    validate(M, v);
    const TailSpec Q = quantile(M, v, tau);
    const Point target = barycenter(superlevel(M.ambient(), v.G, Q.lo));
    SweepReport R;
    R.name = "empirical";
    R.grid = {{"model", M.label}, {"valuation", v.label}, {"tau", to_string(tau)}, {"tolerance", std::to_string(tolerance)}};
    R.columns = {"k", "m_k", "mean", "barycenter", "deviation"};
    std::vector<double> dev;
    for (auto k : ks) {
        const std::int64_t d = d_k(M, k);
        Rat td = tau * rat_of(d);
        Int m = td.get_num() / td.get_den();
        if (m * td.get_den() < td.get_num()) ++m;
        const std::int64_t mk = std::max<std::int64_t>(1, to_i64(m));
        const Point mean = empirical_family_mean(M, v, k, mk);
        double e = 0;
        for (std::size_t i = 0; i < mean.size(); ++i) e = std::max(e, std::fabs(Rat(mean[i] - target[i]).get_d()));
        dev.push_back(e);
        std::ostringstream os;
        os << e;
        R.rows.push_back({std::to_string(k), std::to_string(mk), to_string(mean), to_string(target), os.str()});
    }
    R.record("deviation at the last level within tolerance", dev.back() <= tolerance,
             [&] { return "k=" + std::to_string(ks.back()) + " deviation " + R.rows.back()[4]; });
    R.record("deviation decreases from the first to the last level", dev.back() < dev.front(),
             [&] { return R.rows.front()[4] + " -> " + R.rows.back()[4]; });
    if (!Q.exact()) R.fit("quantile_width", Q.hi - Q.lo);
    return R;
}

}  // namespace okb
