#include "okb/rational.hpp"

#include <limits>
#include <numeric>
#include <regex>

#include "okb/errors.hpp"

namespace okb {

Rat parse_rat(const std::string& s) {
    static const std::regex frac(R"(\s*([+-]?\d+)(?:/(\d+))?\s*)");
    static const std::regex dec(R"(\s*([+-]?)(\d*)\.(\d+)\s*)");
    std::smatch m;
    if (std::regex_match(s, m, frac)) {
        Int num(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str(), 10);
        Int den = 1;
        if (m[2].matched) den = Int(m[2].str(), 10);
        if (den == 0) throw InputError("zero denominator in rational '" + s + "'");
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    if (std::regex_match(s, m, dec)) {
        std::string digits = m[2].str() + m[3].str();
        Int num(digits.empty() ? "0" : digits, 10);
        Int den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, m[3].str().size());
        Rat q(num, den);
        q.canonicalize();
        if (m[1].str() == "-") q = -q;
        return q;
    }
    throw InputError("malformed rational '" + s + "'");
}

std::string to_string(const Rat& q) { return q.get_str(); }

std::string to_string(const Vec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i].get_str();
    }
    return out + ")";
}

Rat make_rat(long num, long den) {
    if (den == 0) throw InputError("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Int floor_of(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Int ceil_of(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rat dot(const Vec& a, const Vec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int dot(const IVec& a, const IVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IVec primitive(const IVec& v) {
    Int g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0 || g == 1) return v;
    IVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mpz_divexact(out[i].get_mpz_t(), v[i].get_mpz_t(), g.get_mpz_t());
    return out;
}

IVec primitive(const Vec& v) {
    Int l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_num() * (l / v[i].get_den());
    return primitive(out);
}

namespace {

// floor(sqrt(q * 4^bits)) and whether it was exact
Int scaled_isqrt(const Rat& q, unsigned bits, bool& exact) {
    Int num = q.get_num() << (2 * bits);
    Int scaled, rem;
    mpz_fdiv_qr(scaled.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
    Int root;
    Int r2;
    mpz_sqrtrem(root.get_mpz_t(), r2.get_mpz_t(), scaled.get_mpz_t());
    exact = (rem == 0 && r2 == 0);
    return root;
}

}  // namespace

Rat sqrt_upper(const Rat& q, unsigned bits) {
    if (q < 0) throw DomainError("sqrt of negative rational");
    bool exact = false;
    Int root = scaled_isqrt(q, bits, exact);
    if (!exact) root += 1;
    Int den = Int(1) << bits;
    Rat r(root, den);
    r.canonicalize();
    return r;
}

Rat sqrt_lower(const Rat& q, unsigned bits) {
    if (q < 0) throw DomainError("sqrt of negative rational");
    bool exact = false;
    Int root = scaled_isqrt(q, bits, exact);
    Rat r(root, Int(1) << bits);
    r.canonicalize();
    return r;
}

bool exact_sqrt(const Rat& q, Rat& root) {
    if (q < 0) return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
    Int a, b;
    mpz_sqrt(a.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), q.get_den_mpz_t());
    root = Rat(a, b);
    root.canonicalize();
    return true;
}

Rat pow(const Rat& q, unsigned e) {
    Rat r = 1;
    for (unsigned i = 0; i < e; ++i) r *= q;
    return r;
}

std::int64_t to_i64(const Int& z) {
    if (!z.fits_slong_p()) throw DomainError("integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

double to_double(const Rat& q) { return q.get_d(); }

}  // namespace okb
