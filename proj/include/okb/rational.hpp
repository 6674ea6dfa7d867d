#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace okb {

// mpq_class keeps values canonical (lowest terms, positive denominator)
// as long as every construction from raw parts goes through parse_rat or
// canonicalize().
using Rat = mpq_class;
using Int = mpz_class;
using Vec = std::vector<Rat>;
using IVec = std::vector<Int>;

Rat parse_rat(const std::string& s);
std::string to_string(const Rat& q);
std::string to_string(const Vec& v);

Rat make_rat(long num, long den = 1);

Int floor_of(const Rat& q);
Int ceil_of(const Rat& q);

Rat dot(const Vec& a, const Vec& b);
Int dot(const IVec& a, const IVec& b);

// Primitive integer vector proportional to v (same direction); zero stays zero.
IVec primitive(const IVec& v);
IVec primitive(const Vec& v);

// Rational upper bound on sqrt(q), q >= 0, accurate to 2^-bits.
Rat sqrt_upper(const Rat& q, unsigned bits = 64);
Rat sqrt_lower(const Rat& q, unsigned bits = 64);

// Exact rational square root if q is a perfect square of a rational.
bool exact_sqrt(const Rat& q, Rat& root);

Rat pow(const Rat& q, unsigned e);

std::int64_t to_i64(const Int& z);
double to_double(const Rat& q);

}  // namespace okb
