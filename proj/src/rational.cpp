#include "mvc/rational.hpp"

#include "mvc/errors.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>

namespace mvc {

std::string to_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

std::string to_decimal(const Rational& r, int places) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = r < 0;
  const Rational magnitude = negative ? Rational(-r) : r;
  // round half up on the magnitude
  const Rational scaled = magnitude * Rational(scale) + Rational(1, 2);
  const BigInt rounded = numerator_of(scaled) / denominator_of(scaled);
  const BigInt whole = rounded / scale;
  std::string frac = BigInt(rounded % scale).str();
  if (static_cast<int>(frac.size()) < places) frac.insert(0, places - frac.size(), '0');
  std::string out = (negative && rounded != 0) ? "-" : "";
  out += whole.str();
  if (places > 0) out += "." + frac;
  return out;
}

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_int(std::string_view s) {
  if (s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_text(text)) throw PreconditionError("not a rational: '" + std::string(text) + "'");
    return Rational(parse_int(text));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' || den[0] == '+') {
    throw PreconditionError("not a rational: '" + std::string(text) + "'");
  }
  const BigInt d = parse_int(den);
  if (d == 0) throw PreconditionError("zero denominator: '" + std::string(text) + "'");
  return Rational(parse_int(num), d);
}

BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (BigInt(q * b) != a && ((a > 0) == (b > 0))) ++q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (q * b != a && ((a > 0) == (b > 0))) ++q;
  return q;
}

BigInt ceil(const Rational& r) { return ceil_div(numerator_of(r), denominator_of(r)); }

BigInt lcm(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }

}  // namespace mvc
