#include "okb/thresholds.hpp"

#include <algorithm>
#include <map>

#include "okb/errors.hpp"

namespace okb {

Rat default_tol() { return make_rat(1, 1000000000); }

ValuationModel ValuationModel::divisorial(std::size_t n, std::string label) {
    return {std::move(label), Rat(1), ConcavePL(AffineFunctional::coordinate(n, 0))};
}

void validate(const GradedSeriesModel& M, const ValuationModel& v) {
    if (v.A <= 0) throw DomainError("valuation '" + v.label + "': log discrepancy must be positive");
    if (v.G.pieces().empty()) throw InputError("valuation '" + v.label + "': G has no pieces");
    if (v.G.dim() != M.dim()) throw InputError("valuation '" + v.label + "': G dimension does not match the model");
    if (!nonnegative_on(v.G, M.ambient())) throw DomainError("valuation '" + v.label + "': G is negative on the body");
}

namespace {

struct Ranked {
    Rat value;  // k * G(x)
    const IPoint* point;
};

std::vector<Ranked> ranked(const PointCloud& pc, const ConcavePL& G) {
    std::vector<Ranked> out;
    out.reserve(pc.size());
    const Rat k(static_cast<long>(pc.k));
    for (std::size_t i = 0; i < pc.size(); ++i) out.push_back({G(pc.coords(i)) * k, &pc.points[i]});
    std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
        if (a.value != b.value) return a.value > b.value;
        return *a.point > *b.point;
    });
    return out;
}

JumpingVector to_vector(std::int64_t k, const std::vector<Ranked>& r) {
    JumpingVector jv{k, {}};
    jv.values.reserve(r.size());
    for (auto& x : r) jv.values.push_back(x.value);
    return jv;
}

Rat top_average(const JumpingVector& jv, std::int64_t m, const char* what) {
    if (m < 1 || m > static_cast<std::int64_t>(jv.values.size()))
        throw DomainError(std::string(what) + ": m=" + std::to_string(m) + " outside [1, " +
                          std::to_string(jv.values.size()) + "]");
    Rat sum = 0;
    for (std::int64_t l = 0; l < m; ++l) sum += jv.values[l];
    return sum / (Rat(static_cast<long>(jv.k)) * Rat(static_cast<long>(m)));
}

const Rat& ambient_volume(const GradedSeriesModel& M, Rat& storage) {
    if (!M.ambient().full_dimensional()) throw DomainError("the ambient body must be full-dimensional");
    storage = volume(M.ambient());
    return storage;
}

void check_tau(const Rat& tau) {
    if (tau < 0 || tau > 1) throw DomainError("tau must lie in [0,1]");
}

// polynomial in s with rational coefficients, lowest degree first
Rat eval_poly(const std::vector<Rat>& c, const Rat& s) {
    Rat r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * s + *it;
    return r;
}

// Interpolating polynomial through (xs[i], ys[i]) via Newton's divided differences.
std::vector<Rat> interpolate(const std::vector<Rat>& xs, std::vector<Rat> ys) {
    const std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
    std::vector<Rat> c(n, Rat(0));
    std::vector<Rat> basis{Rat(1)};  // Π (s - xs[m])
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < basis.size(); ++d) c[d] += ys[i] * basis[d];
        std::vector<Rat> next(basis.size() + 1, Rat(0));
        for (std::size_t d = 0; d < basis.size(); ++d) {
            next[d + 1] += basis[d];
            next[d] -= basis[d] * xs[i];
        }
        basis = std::move(next);
    }
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    return c;
}

}  // namespace

JumpingVector jumping_numbers(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k) {
    validate(M, v);
    return to_vector(k, ranked(M.discrete_body(k), v.G));
}

JumpingVector idealized_jumping(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k) {
    if (k < 1) throw DomainError("k must be positive");
    validate(M, v);
    return to_vector(k, ranked(idealized_body(M, k), v.G));
}

Rat S_km(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m) {
    return top_average(jumping_numbers(M, v, k), m, "S_km");
}

Rat Sbar_km(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m) {
    return top_average(idealized_jumping(M, v, k), m, "Sbar_km");
}

std::vector<Rat> profile(const JumpingVector& jv) {
    std::vector<Rat> out;
    out.reserve(jv.values.size());
    Rat sum = 0;
    const Rat k(static_cast<long>(jv.k));
    for (std::size_t m = 1; m <= jv.values.size(); ++m) {
        sum += jv.values[m - 1];
        out.push_back(sum / (k * Rat(static_cast<long>(m))));
    }
    return out;
}

std::vector<Rat> S_k_profile(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k) {
    return profile(jumping_numbers(M, v, k));
}

std::vector<Rat> Sbar_k_profile(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k) {
    return profile(idealized_jumping(M, v, k));
}

VanishingOrders S0_and_sigma(const GradedSeriesModel& M, const ValuationModel& v, std::optional<std::int64_t> k) {
    validate(M, v);
    VanishingOrders out{maximize(M.ambient(), v.G).first, minimize(M.ambient(), v.G), std::nullopt, std::nullopt};
    if (k) {
        auto jv = jumping_numbers(M, v, *k);
        const Rat kk(static_cast<long>(*k));
        out.quantum_S0 = jv.values.front() / kk;
        out.quantum_sigma = jv.values.back() / kk;
    }
    return out;
}

EmpiricalMeasure mu_k(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k) {
    auto jv = jumping_numbers(M, v, k);
    const Rat kk(static_cast<long>(k));
    const Rat unit = make_rat(1, static_cast<long>(jv.values.size()));
    EmpiricalMeasure mu;
    for (auto& j : jv.values) {
        Rat x = j / kk;
        if (!mu.atoms.empty() && mu.atoms.back().first == x)
            mu.atoms.back().second += unit;
        else
            mu.atoms.emplace_back(std::move(x), unit);
    }
    return mu;
}

Rat ccdf_continuous(const GradedSeriesModel& M, const ValuationModel& v, const Rat& t) {
    validate(M, v);
    Rat vol;
    ambient_volume(M, vol);
    const Rat S0 = maximize(M.ambient(), v.G).first;
    if (t < 0 || t > S0) throw DomainError("t=" + to_string(t) + " outside [0, " + to_string(S0) + "]");
    return volume(superlevel(M.ambient(), v.G, t)) / vol;
}

TailSpec quantile(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau, const Rat& tol) {
    check_tau(tau);
    if (tol <= 0) throw DomainError("tolerance must be positive");
    validate(M, v);
    Rat vol;
    ambient_volume(M, vol);
    const ConvexBody& D = M.ambient();
    const Rat S0 = maximize(D, v.G).first;
    const Rat sigma = minimize(D, v.G);
    auto F = [&](const Rat& t) -> Rat { return volume(superlevel(D, v.G, t)) / vol; };

    TailSpec out{tau, S0, S0, F(S0)};
    if (tau <= out.atom_at_top) return out;

    std::vector<Rat> breaks{sigma, S0};
    for (const auto& region : linearity_regions(D, v.G))
        for (const auto& p : region.vertices()) breaks.push_back(v.G(p));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](const Rat& b) { return b < sigma || b > S0; }),
                 breaks.end());

    // walk down until F(lower end) >= tau; then F(upper end) < tau
    Rat f_hi = out.atom_at_top;
    for (std::size_t i = breaks.size() - 1; i > 0; --i) {
        const Rat a = breaks[i - 1], b = breaks[i];
        const Rat f_lo = F(a);
        if (f_lo < tau) {
            f_hi = f_lo;
            continue;
        }
        if (f_lo == tau) {
            out.lo = out.hi = a;
            return out;
        }
        // F is a polynomial of degree <= n on [a, b]; work in s = t - a
        const std::size_t n = D.dim();
        const Rat L = b - a;
        std::vector<Rat> xs, ys;
        for (std::size_t j = 0; j <= n; ++j) {
            xs.push_back(L * make_rat(static_cast<long>(j), static_cast<long>(n)));
            ys.push_back(j == 0 ? f_lo : j == n ? f_hi : F(a + xs.back()));
        }
        std::vector<Rat> c = interpolate(xs, ys);
        c[0] -= tau;
        auto in_range = [&](const Rat& s) { return s >= 0 && s <= L; };
        if (c.size() == 2) {
            const Rat s = -c[0] / c[1];
            out.lo = out.hi = a + s;
            return out;
        }
        if (c.size() == 3) {
            const Rat disc = c[1] * c[1] - 4 * c[2] * c[0];
            Rat r;
            if (disc >= 0 && exact_sqrt(disc, r)) {
                std::optional<Rat> best;
                for (const Rat& s : {Rat((-c[1] + r) / (2 * c[2])), Rat((-c[1] - r) / (2 * c[2]))})
                    if (in_range(s) && (!best || s > *best)) best = s;
                if (best) {
                    out.lo = out.hi = a + *best;
                    return out;
                }
            }
        }
        Rat lo = 0, hi = L;
        while (hi - lo > tol) {
            const Rat mid = (lo + hi) / 2;
            if (eval_poly(c, mid) >= 0)
                lo = mid;
            else
                hi = mid;
        }
        out.lo = a + lo;
        out.hi = a + hi;
        return out;
    }
    // F(sigma) = 1 >= tau always, so the loop returns
    out.lo = out.hi = sigma;
    return out;
}

Rat quantum_quantile(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, const Rat& tau) {
    check_tau(tau);
    auto jv = jumping_numbers(M, v, k);
    const std::int64_t d = static_cast<std::int64_t>(jv.values.size());
    std::int64_t m = to_i64(floor_of(tau * Rat(static_cast<long>(d))));
    if (m == 0) m = 1;
    return jv.values[m - 1] / Rat(static_cast<long>(k));
}

Interval S_tau(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau, const Rat& tol) {
    check_tau(tau);
    if (tau == 0) {
        validate(M, v);
        const Rat S0 = maximize(M.ambient(), v.G).first;
        return {S0, S0};
    }
    const TailSpec q = quantile(M, v, tau, tol);
    Rat vol;
    ambient_volume(M, vol);
    const ConvexBody& D = M.ambient();
    // Φ(q) = (∫_{G>=q} G - (F(q) - τ)|Δ| q) / (τ|Δ|) is minimized at q = Q(τ)
    // with Φ'(q) = -(F(q) - τ)/τ.
    auto F_and_Phi = [&](const Rat& t) -> std::pair<Rat, Rat> {
        const ConvexBody top = superlevel(D, v.G, t);
        const Rat f = volume(top) / vol;
        const Rat integral = top.full_dimensional() ? integrate(top, v.G) : Rat(0);
        return {f, Rat((integral - (f - tau) * vol * t) / (tau * vol))};
    };
    const auto [f_lo, phi_lo] = F_and_Phi(q.lo);
    if (q.exact()) return {phi_lo, phi_lo};
    const auto [f_hi, phi_hi] = F_and_Phi(q.hi);
    (void)f_hi;
    Interval out;
    out.hi = std::min(phi_lo, phi_hi);
    out.lo = phi_lo - (q.hi - q.lo) * (f_lo - tau) / tau;
    return out;
}

PointCloud select_compatible_family(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k,
                                    std::int64_t m) {
    validate(M, v);
    const PointCloud& body = M.discrete_body(k);
    if (m < 1 || m > static_cast<std::int64_t>(body.size()))
        throw DomainError("m=" + std::to_string(m) + " outside [1, d_k]");
    auto r = ranked(body, v.G);
    std::vector<IPoint> pts;
    for (std::int64_t i = 0; i < m; ++i) pts.push_back(*r[i].point);
    return PointCloud(k, std::move(pts));
}

std::vector<std::pair<Point, Rat>> empirical_family_measure(const GradedSeriesModel& M, const ValuationModel& v,
                                                            std::int64_t k, std::int64_t m) {
    PointCloud fam = select_compatible_family(M, v, k, m);
    const Rat w = make_rat(1, static_cast<long>(m));
    std::vector<std::pair<Point, Rat>> out;
    for (std::size_t i = 0; i < fam.size(); ++i) out.emplace_back(fam.coords(i), w);
    return out;
}

Point empirical_family_mean(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m) {
    Point mean(M.dim(), Rat(0));
    for (auto& [p, w] : empirical_family_measure(M, v, k, m))
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += w * p[i];
    return mean;
}

namespace {

// S given as an interval for each member of the family
RestrictedThreshold restricted_min(const std::vector<ValuationModel>& family, const std::vector<Interval>& S) {
    RestrictedThreshold out;
    out.infinite = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (S[i].hi == 0) continue;
        if (S[i].lo <= 0) throw DomainError("tolerance too coarse to bound S for '" + family[i].label + "'");
        const Rat lo = family[i].A / S[i].hi, hi = family[i].A / S[i].lo;
        if (out.infinite) {
            out = {false, lo, hi, family[i].label};
            continue;
        }
        if (hi < out.hi || (hi == out.hi && family[i].label < out.argmin)) {
            out.hi = hi;
            out.argmin = family[i].label;
        }
        out.lo = std::min(out.lo, lo);
    }
    return out;
}

void check_family(const std::vector<ValuationModel>& family) {
    if (family.empty()) throw DomainError("the valuation family is empty");
}

}  // namespace

RestrictedThreshold delta_km_restricted(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                                        std::int64_t k, std::int64_t m) {
    check_family(family);
    std::vector<Interval> S;
    for (auto& v : family) {
        Rat s = S_km(M, v, k, m);
        S.push_back({s, s});
    }
    return restricted_min(family, S);
}

RestrictedThreshold alpha_k_restricted(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                                       std::int64_t k) {
    return delta_km_restricted(M, family, k, 1);
}

RestrictedThreshold delta_tau_restricted(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                                         const Rat& tau, const Rat& tol) {
    check_family(family);
    std::vector<Interval> S;
    for (auto& v : family) S.push_back(S_tau(M, v, tau, tol));
    return restricted_min(family, S);
}

MRule MRule::parse(const std::string& s) {
    static const std::map<std::string, Kind> plain{{"one", Kind::One},
                                                   {"ceil_tau", Kind::CeilTau},
                                                   {"dk", Kind::Dk},
                                                   {"dk_minus_sqrt", Kind::DkMinusSqrt},
                                                   {"sqrt", Kind::Sqrt}};
    MRule r;
    if (auto it = plain.find(s); it != plain.end()) {
        r.kind = it->second;
        return r;
    }
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    if (colon == std::string::npos || (head != "constant" && head != "dk_minus_ck"))
        throw InputError("unknown m rule '" + s + "'");
    r.kind = head == "constant" ? Kind::Constant : Kind::DkMinusCk;
    r.c = parse_rat(s.substr(colon + 1));
    if (r.c < 0) throw InputError("m rule constant must be non-negative");
    return r;
}

std::string MRule::name() const {
    switch (kind) {
        case Kind::One: return "one";
        case Kind::CeilTau: return "ceil_tau";
        case Kind::Dk: return "dk";
        case Kind::DkMinusSqrt: return "dk_minus_sqrt";
        case Kind::Sqrt: return "sqrt";
        case Kind::Constant: return "constant:" + to_string(c);
        case Kind::DkMinusCk: return "dk_minus_ck:" + to_string(c);
    }
    return "?";
}

std::int64_t MRule::eval(std::int64_t dk, std::int64_t k, std::size_t n, const Rat& tau) const {
    const Rat d(static_cast<long>(dk));
    Int m;
    switch (kind) {
        case Kind::One: m = 1; break;
        case Kind::CeilTau: m = ceil_of(tau * d); break;
        case Kind::Dk: m = dk; break;
        case Kind::DkMinusSqrt: m = Int(static_cast<long>(dk)) - sqrt(Int(static_cast<long>(dk))); break;
        case Kind::Sqrt: m = sqrt(Int(static_cast<long>(dk))); break;
        case Kind::Constant: m = floor_of(c); break;
        case Kind::DkMinusCk:
            m = floor_of(d - c * pow(Rat(static_cast<long>(k)), static_cast<unsigned>(n - 1)));
            break;
    }
    if (m < 1) return 1;
    if (m > dk) return dk;
    return to_i64(m);
}

std::int64_t partial_gap_count(const GradedSeriesModel& M, const ValuationModel& v, const Rat& t, std::int64_t k) {
    validate(M, v);
    const ConvexBody top = superlevel(M.ambient(), v.G, t);
    const std::int64_t ideal = top.is_empty() ? 0 : count(top, k);
    const PointCloud& body = M.discrete_body(k);
    std::int64_t have = 0;
    for (std::size_t i = 0; i < body.size(); ++i)
        if (v.G(body.coords(i)) >= t) ++have;
    return ideal - have;
}

std::vector<ValuationModel> coordinate_family(std::size_t n, const Rat& s) {
    std::vector<ValuationModel> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({"x" + std::to_string(i + 1), Rat(1), ConcavePL(AffineFunctional::coordinate(n, i))});
    AffineFunctional rest{Vec(n, Rat(-1)), s};
    out.push_back({to_string(s) + "-sum", Rat(1), ConcavePL(rest)});
    return out;
}

}  // namespace okb
