// okb: command-line front end for the okb library.
//
// exit codes: 0 pass, 1 domain error, 2 input error, 3 verification failure

#include <CLI11/CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "okb/errors.hpp"
#include "okb/estimates.hpp"
#include "okb/io.hpp"

using namespace okb;
namespace fs = std::filesystem;

namespace {

constexpr int kDomainError = 1;
constexpr int kInputError = 2;
constexpr int kVerifyFailed = 3;

struct Options {
    std::string in, valuations, out;
    std::optional<std::int64_t> k, k_min, k_max;
    std::optional<std::string> tau;
    std::string m_rule, tol = "1/1000000000", ell = "ceil_half";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::size_t samples = 0;
    std::string nu = "1/10";
    std::string suite;
};

void emit(const Options& o, const std::string& text) {
    if (o.out.empty())
        std::cout << text;
    else
        io::write_file(o.out, text);
}

Rat tau_or(const Options& o, const Rat& fallback) { return o.tau ? parse_rat(*o.tau) : fallback; }

KRange range_of(const Options& o, std::int64_t lo, std::int64_t hi) {
    KRange r{o.k_min.value_or(lo), o.k_max.value_or(hi)};
    r.validate();
    return r;
}

GradedSeriesModel model_or(const Options& o, GradedSeriesModel fallback) {
    return o.in.empty() ? std::move(fallback) : io::model_from(io::read_file(o.in));
}

ValuationModel valuation_or(const Options& o, std::size_t n) {
    return o.valuations.empty() ? ValuationModel::divisorial(n) : io::family_from(io::read_file(o.valuations)).front();
}

// ---- body ----

int cmd_body(const Options& o) {
    if (o.in.empty()) throw InputError("body needs --in polytope.json");
    const ConvexBody B = io::polytope_from(io::read_file(o.in));
    if (!B.full_dimensional()) throw DomainError("the polytope is not full-dimensional");
    io::Json out;
    out["dim"] = B.dim();
    out["vertices"] = B.vertices().size();
    out["volume"] = io::to_json(volume(B));
    io::Json bc = io::Json::array();
    for (const auto& x : barycenter(B)) bc.push_back(io::to_json(x));
    out["barycenter"] = bc;
    out["chebyshev_radius_lb"] = io::to_json(chebyshev_ball(B).radius_lb);
    if (o.k) {
        if (*o.k < 1) throw InputError("--k must be positive");
        out["k"] = *o.k;
        out["count"] = count(B, *o.k, o.jobs);
    }
    emit(o, out.dump(2) + "\n");
    return 0;
}

// ---- series ----

int cmd_series(const Options& o) {
    if (o.in.empty()) throw InputError("series needs --in model.json");
    const auto M = io::model_from(io::read_file(o.in));
    if (o.k) {
        io::Json out;
        out["model"] = M.label;
        out["k"] = *o.k;
        out["d_k"] = d_k(M, *o.k);
        out["D_k"] = D_k(M, *o.k);
        out["discrete_body"] = io::to_json(discrete_body(M, *o.k));
        out["gap_set"] = io::to_json(gap_set(M, *o.k));
        emit(o, out.dump(2) + "\n");
        return 0;
    }
    const KRange r = range_of(o, 1, M.max_level().value_or(30));
    std::ostringstream os;
    os << "k,d_k,D_k,diff\n";
    for (const auto& row : gap_table(M, r.k_max))
        if (row.k >= r.k_min) os << row.k << ',' << row.d << ',' << row.D << ',' << row.diff << '\n';
    emit(o, os.str());
    return 0;
}

// ---- thresholds ----

int cmd_thresholds(const Options& o) {
    if (o.in.empty()) throw InputError("thresholds needs --in model.json");
    const auto M = io::model_from(io::read_file(o.in));
    const auto family = o.valuations.empty() ? std::vector<ValuationModel>{ValuationModel::divisorial(M.dim())}
                                             : io::family_from(io::read_file(o.valuations));
    for (const auto& v : family) validate(M, v);
    const Rat tau = tau_or(o, Rat(1, 2)), tol = parse_rat(o.tol);
    if (tau < 0 || tau > 1) throw DomainError("tau must lie in [0,1]");
    const MRule rule = MRule::parse(o.m_rule.empty() ? "ceil_tau" : o.m_rule);
    const KRange r = range_of(o, 1, 20);
    std::vector<Interval> st;
    for (const auto& v : family) st.push_back(S_tau(M, v, tau, tol));

    std::ostringstream os;
    os << "valuation,k,d_k,m_k,j_head,S_km,Sbar_km,quantum_quantile,S_tau_lo,S_tau_hi,delta_km\n";
    for (std::int64_t k = r.k_min; k <= r.k_max; ++k) {
        if (!M.in_levels(k)) continue;
        const std::int64_t d = d_k(M, k);
        const std::int64_t m = rule.eval(d, k, M.dim(), tau);
        const auto delta = delta_km_restricted(M, family, k, m);
        const std::string dtext = delta.infinite ? "inf" : to_string(delta.lo);
        for (std::size_t i = 0; i < family.size(); ++i) {
            const auto& v = family[i];
            const auto j = jumping_numbers(M, v, k).values;
            os << v.label << ',' << k << ',' << d << ',' << m << ',' << to_string(j.front() / Rat(static_cast<long>(k)))
               << ',' << to_string(S_km(M, v, k, m)) << ',' << to_string(Sbar_km(M, v, k, m)) << ','
               << to_string(quantum_quantile(M, v, k, tau)) << ',' << to_string(st[i].lo) << ',' << to_string(st[i].hi)
               << ',' << dtext << '\n';
        }
    }
    emit(o, os.str());
    return 0;
}

// ---- verify ----

std::vector<SweepReport> run_suite(const std::string& suite, const Options& o) {
    const Rat tol = parse_rat(o.tol);
    std::vector<SweepReport> out;
    if (suite == "ehrhart") {
        const ConvexBody K = o.in.empty() ? ConvexBody::unit_cube(2) : io::polytope_from(io::read_file(o.in));
        const Rat nu = parse_rat(o.nu);
        const auto bodies = sample_sub_bodies(K, nu, o.samples ? o.samples : 200, o.seed);
        out.push_back(verify_uniform_ehrhart(K, bodies, nu, range_of(o, 1, 40), o.jobs));
    } else if (suite == "lowerbound") {
        if (!o.in.empty())
            out.push_back(verify_lower_bound_constant(io::polytope_from(io::read_file(o.in)), range_of(o, 1, 60)));
        else
            out.push_back(verify_lower_bound_suite(3, o.samples ? o.samples : 100, o.seed, range_of(o, 1, 60), o.jobs));
    } else if (suite == "concave") {
        const ConvexBody K = o.in.empty() ? ConvexBody::unit_cube(2) : io::polytope_from(io::read_file(o.in));
        std::vector<std::pair<ConvexBody, ConcavePL>> samples;
        const auto bodies = sample_sub_bodies(K, parse_rat(o.nu), o.samples ? o.samples : 50, o.seed);
        for (std::size_t i = 0; i < bodies.size(); ++i) samples.emplace_back(bodies[i], sample_concave(bodies[i], o.seed + i));
        out.push_back(verify_concave_sum_bound(samples, range_of(o, 1, 40), o.jobs));
    } else if (suite == "cones") {
        const EllRule ell = EllRule::parse(o.ell);
        out.push_back(verify_cone_counts(ConvexBody::simplex(2), 0, 1, Point{Rat(1), Rat(0)}, ell, range_of(o, 1, 40)));
        out.push_back(verify_cone_counts(ConvexBody::unit_cube(2), Rat(1, 4), Rat(3, 4), std::nullopt, ell, range_of(o, 1, 40)));
    } else if (suite == "maxp1") {
        const KRange r = range_of(o, 1, 60);
        if (!o.in.empty()) {
            out.push_back(verify_maxp1(model_or(o, models::segment()), r));
        } else {
            out.push_back(verify_maxp1(models::canonical_generic(3), r));
            out.push_back(verify_maxp1(models::top_gap_square(r.k_max), r));
        }
    } else if (suite == "stwosided") {
        const auto M = model_or(o, models::segment());
        out.push_back(verify_S_two_sided(M, valuation_or(o, M.dim()), tau_or(o, Rat(1, 2)), MRule::parse(o.m_rule.empty() ? "ceil_tau" : o.m_rule),
                                         range_of(o, 1, 40), tol, o.jobs));
    } else if (suite == "deltarate") {
        const auto M = model_or(o, models::anticanonical_p2());
        const auto family = o.valuations.empty() ? (o.in.empty() ? coordinate_family(2, 3) : std::vector{ValuationModel::divisorial(M.dim())})
                                                 : io::family_from(io::read_file(o.valuations));
        out.push_back(verify_delta_rate(M, family, tau_or(o, Rat(1)), MRule::parse(o.m_rule.empty() ? "dk" : o.m_rule), range_of(o, 1, 20), tol, o.jobs));
    } else if (suite == "endpoints") {
        const auto M = model_or(o, models::segment());
        out.push_back(verify_endpoint_limits(M, valuation_or(o, M.dim()), range_of(o, 1, 40), o.jobs));
    } else if (suite == "weierstrass") {
        out.push_back(verify_weierstrass(8, o.k_max.value_or(50)));
    } else if (suite == "counting") {
        out.push_back(verify_counting_translation(o.samples ? o.samples : 100, o.seed, o.k_max.value_or(20), o.jobs));
    } else if (suite == "sandwich") {
        out.push_back(verify_sandwich_suite(o.k_max.value_or(40), o.jobs));
    } else if (suite == "dkdk") {
        const KRange r = range_of(o, 1, 40);
        for (const auto& M : models::bundled(r.k_max))
            if (!M.max_level() || *M.max_level() >= r.k_max) out.push_back(verify_dkdk(M, r));
    } else if (suite == "empirical") {
        const auto M = model_or(o, models::unit_simplex());
        const std::int64_t hi = o.k_max.value_or(40);
        out.push_back(verify_empirical_measure(M, valuation_or(o, M.dim()), tau_or(o, Rat(1, 4)), {hi / 2, hi}, 0.05));
    } else if (suite == "all") {
        Options d = o;
        d.in.clear();
        d.valuations.clear();
        for (const char* s : {"weierstrass", "counting", "lowerbound", "ehrhart", "concave", "cones", "sandwich", "maxp1",
                              "stwosided", "deltarate", "endpoints", "dkdk", "empirical"}) {
            auto part = run_suite(s, d);
            for (auto& r : part) out.push_back(std::move(r));
        }
    } else {
        throw InputError("unknown suite \"" + suite + "\"");
    }
    return out;
}

int cmd_verify(const Options& o) {
    auto reports = run_suite(o.suite, o);
    if (!o.out.empty()) fs::create_directories(o.out);
    bool ok = true;
    std::map<std::string, int> seen;
    for (const auto& r : reports) {
        std::string file = r.name;
        if (int n = seen[r.name]++) file += "-" + std::to_string(n + 1);
        if (!o.out.empty()) {
            io::write_file((fs::path(o.out) / (file + ".json")).string(), io::to_json(r).dump(2) + "\n");
            io::write_file((fs::path(o.out) / (file + ".csv")).string(), r.csv());
        }
        std::cout << (r.passed() ? "PASS " : "FAIL ") << file;
        for (const auto& [k, v] : r.grid)
            if (k == "model" || k == "valuation" || k == "tau") std::cout << ' ' << k << '=' << v;
        std::cout << '\n';
        for (const auto& c : r.checks) {
            std::cout << "  " << (c.passed() ? "ok   " : "FAIL ") << c.assertion << " (" << c.trials - c.failures << '/'
                      << c.trials << ")\n";
            if (!c.passed()) std::cout << "       witness: " << c.witness << '\n';
        }
        for (const auto& [k, v] : r.fitted) std::cout << "  fitted " << k << " = " << to_string(v) << '\n';
        if (r.rate) {
            if (r.rate->exact())
                std::cout << "  exponent -inf (exact)\n";
            else
                std::cout << "  exponent " << r.rate->exponent << " (approx, residual " << r.rate->residual << ")\n";
        }
        ok = ok && r.passed();
    }
    return ok ? 0 : kVerifyFailed;
}

void common_flags(CLI::App* c, Options& o) {
    c->add_option("--in", o.in, "input JSON file");
    c->add_option("--out", o.out, "output file (verify: output directory)");
    c->add_option("--k-min", o.k_min, "first level of the sweep");
    c->add_option("--k-max", o.k_max, "last level of the sweep");
    c->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"okb: discrete Okounkov bodies, thresholds and lattice estimates"};
    app.require_subcommand(1);
    Options o;

    auto* body = app.add_subcommand("body", "volume, barycenter, Chebyshev radius and lattice count of a polytope");
    common_flags(body, o);
    body->add_option("--k", o.k, "level for the lattice count");

    auto* series = app.add_subcommand("series", "discrete bodies, gap sets and the D_k - d_k table of a model");
    common_flags(series, o);
    series->add_option("--k", o.k, "emit the discrete body and gap set at this level");

    auto* thresholds = app.add_subcommand("thresholds", "jumping numbers, S_km, quantiles and delta_km over a k sweep");
    common_flags(thresholds, o);
    thresholds->add_option("--valuations", o.valuations, "valuation family JSON");
    thresholds->add_option("--tau", o.tau, "quantile level p/q");
    thresholds->add_option("--m-rule", o.m_rule, "one|ceil_tau|dk|dk_minus_sqrt|sqrt|constant:c|dk_minus_ck:c");
    thresholds->add_option("--tol", o.tol, "bracket width for irrational quantiles");
    thresholds->add_option("--sweep", o.suite, "sweep spec JSON {tau, m_rule, k_range}");

    auto* verify = app.add_subcommand("verify", "run a verification sweep");
    common_flags(verify, o);
    verify->add_option("suite", o.suite, "ehrhart|lowerbound|concave|cones|maxp1|stwosided|deltarate|endpoints|weierstrass|"
                                         "counting|sandwich|dkdk|empirical|all")
        ->required();
    verify->add_option("--valuations", o.valuations, "valuation family JSON");
    verify->add_option("--tau", o.tau, "quantile level p/q");
    verify->add_option("--m-rule", o.m_rule, "m_k rule");
    verify->add_option("--tol", o.tol, "bracket width for irrational quantiles");
    verify->add_option("--seed", o.seed, "sampler seed");
    verify->add_option("--samples", o.samples, "number of sampled bodies");
    verify->add_option("--nu", o.nu, "minimal sub-body volume p/q");
    verify->add_option("--ell", o.ell, "cone rule k|ceil_half|ceil_sqrt|ceil_frac:c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*thresholds && !o.suite.empty()) {
            io::SweepSpec defaults;
            defaults.tau = tau_or(o, Rat(1, 2));
            defaults.m_rule = o.m_rule.empty() ? "ceil_tau" : o.m_rule;
            defaults.range = {o.k_min.value_or(1), o.k_max.value_or(20)};
            const auto spec = io::sweep_from(io::read_file(o.suite), defaults);
            o.tau = to_string(spec.tau);
            o.m_rule = spec.m_rule;
            o.k_min = spec.range.k_min;
            o.k_max = spec.range.k_max;
        }
        if (*body) return cmd_body(o);
        if (*series) return cmd_series(o);
        if (*thresholds) return cmd_thresholds(o);
        return cmd_verify(o);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomainError;
    }
}
