#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "okb/geometry.hpp"
#include "okb/series.hpp"

namespace okb {

// 1/10^9
Rat default_tol();

// A divisorial valuation reduced to its data: the log discrepancy A and the
// concave transform G on the ambient body.
struct ValuationModel {
    std::string label;
    Rat A;
    ConcavePL G;

    // A = 1, G = p_1
    static ValuationModel divisorial(std::size_t n, std::string label = "p1");
};

// Throws DomainError unless A > 0, G matches the ambient dimension and G >= 0 on Δ.
void validate(const GradedSeriesModel& M, const ValuationModel& v);

struct JumpingVector {
    std::int64_t k = 0;
    std::vector<Rat> values;  // non-increasing
};

JumpingVector jumping_numbers(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k);
JumpingVector idealized_jumping(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k);

Rat S_km(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m);
Rat Sbar_km(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m);

// S_{k,m} (resp. S̄_{k,m}) for m = 1..d_k (resp. D_k) in one pass
std::vector<Rat> S_k_profile(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k);
std::vector<Rat> Sbar_k_profile(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k);
std::vector<Rat> profile(const JumpingVector& jv);

struct VanishingOrders {
    Rat S0, sigma;
    std::optional<Rat> quantum_S0, quantum_sigma;  // j_{k,1}/k and j_{k,d_k}/k
};
VanishingOrders S0_and_sigma(const GradedSeriesModel& M, const ValuationModel& v,
                             std::optional<std::int64_t> k = std::nullopt);

struct EmpiricalMeasure {
    std::vector<std::pair<Rat, Rat>> atoms;  // (position, weight), positions decreasing
};
EmpiricalMeasure mu_k(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k);

// |{G >= t}| / |Δ|; Δ must be full-dimensional.
Rat ccdf_continuous(const GradedSeriesModel& M, const ValuationModel& v, const Rat& t);

// Q(τ) = sup{t : F(t) >= τ}, either exact (lo == hi) or bracketed with
// F(lo) >= τ > F(hi) and hi - lo <= tol.
struct TailSpec {
    Rat tau;
    Rat lo, hi;
    Rat atom_at_top;
    bool exact() const { return lo == hi; }
    const Rat& quantile() const { return lo; }
};
TailSpec quantile(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau, const Rat& tol = default_tol());

Rat quantum_quantile(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, const Rat& tau);

struct Interval {
    Rat lo, hi;
    bool exact() const { return lo == hi; }
    Rat mid() const { return (lo + hi) / 2; }
};
// Average of G over the top τ of Δ by volume; exact when Q(τ) is, else certified.
Interval S_tau(const GradedSeriesModel& M, const ValuationModel& v, const Rat& tau, const Rat& tol = default_tol());

// The m points of Δ_k with the largest G, ties to the lexicographically larger point.
PointCloud select_compatible_family(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m);
// uniform atoms on the selected family
std::vector<std::pair<Point, Rat>> empirical_family_measure(const GradedSeriesModel& M, const ValuationModel& v,
                                                            std::int64_t k, std::int64_t m);
Point empirical_family_mean(const GradedSeriesModel& M, const ValuationModel& v, std::int64_t k, std::int64_t m);

// Minimum of A/S over an explicit family. This only bounds the true
// threshold from above. infinite when every S vanishes.
struct RestrictedThreshold {
    bool infinite = false;
    Rat lo, hi;
    std::string argmin;
    bool exact() const { return !infinite && lo == hi; }
};
RestrictedThreshold delta_km_restricted(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                                        std::int64_t k, std::int64_t m);
RestrictedThreshold alpha_k_restricted(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                                       std::int64_t k);
RestrictedThreshold delta_tau_restricted(const GradedSeriesModel& M, const std::vector<ValuationModel>& family,
                                         const Rat& tau, const Rat& tol = default_tol());

// Rules m_k for sweeps, clamped to [1, d_k].
struct MRule {
    enum class Kind { One, CeilTau, Dk, DkMinusSqrt, Sqrt, Constant, DkMinusCk };
    Kind kind = Kind::CeilTau;
    Rat c;

    // "one", "ceil_tau", "dk", "dk_minus_sqrt", "sqrt", "constant:c", "dk_minus_ck:c"
    static MRule parse(const std::string& s);
    std::string name() const;
    std::int64_t eval(std::int64_t dk, std::int64_t k, std::size_t n, const Rat& tau) const;
};

// #(Δ^t ∩ Z^n/k) - #{x ∈ Δ_k : G(x) >= t}
std::int64_t partial_gap_count(const GradedSeriesModel& M, const ValuationModel& v, const Rat& t, std::int64_t k);

// coordinate family A = 1, G = x_i (i < n) and G = s - Σ x_i
std::vector<ValuationModel> coordinate_family(std::size_t n, const Rat& s);

}  // namespace okb
