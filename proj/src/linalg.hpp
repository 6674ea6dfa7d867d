#pragma once

// Small exact linear-algebra helpers shared by the geometry kernel.

#include <vector>

#include "okb/rational.hpp"

namespace okb::detail {

// Nonzero rows of the reduced row echelon form; pivots[i] is the pivot
// column of row i.
std::vector<Vec> rref(std::vector<Vec> rows, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const std::vector<Vec>& rows);
Rat det(std::vector<Vec> m);
// rank of {p - points[0]}
std::size_t affine_rank(const std::vector<Vec>& points);

struct LpResult {
    Rat value;
    Vec x;
};

// maximize c.x subject to A x <= b, x >= 0, where b >= 0 so the origin is
// feasible. Dense tableau, Bland's rule. Throws DomainError if unbounded.
LpResult lp_maximize(const std::vector<Vec>& A, const Vec& b, const Vec& c);

}  // namespace okb::detail
