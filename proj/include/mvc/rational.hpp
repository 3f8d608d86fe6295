#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace mvc {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Decimal rendering rounded half-up to `places` digits, e.g. "0.466667".
std::string to_decimal(const Rational& r, int places = 6);

// Accepts "p/q", "p", and signed forms. Throws PreconditionError otherwise.
Rational parse_rational(std::string_view text);

BigInt ceil_div(const BigInt& a, const BigInt& b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);

// Smallest integer >= r.
BigInt ceil(const Rational& r);

BigInt lcm(const BigInt& a, const BigInt& b);

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

}  // namespace mvc
