#pragma once

// Exact time arithmetic. Every deadline comparison in the protocol is done on
// rationals so that "completes strictly before" has no floating-point ties.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rbc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Seconds in the agreed global frame, c = 1.
using Time = Rational;

namespace detail {

inline BigInt pow10(unsigned exponent) {
  BigInt result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= 10;
  return result;
}

inline BigInt parse_digits(std::string_view digits) {
  BigInt value = 0;
  for (char c : digits) {
    value *= 10;
    value += c - '0';
  }
  return value;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

// Accepts "12", "-0.5", "1e-5", "2.5E+3" and "p/q". Anything else throws
// std::invalid_argument.
inline Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not an exact decimal or fraction: '" + original + "'");
  };
  if (text.empty()) return fail();

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
    BigInt d = detail::parse_digits(den);
    if (d == 0) return fail();
    Rational r(detail::parse_digits(num), d);
    return negative ? Rational(-r) : r;
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    auto exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!detail::all_digits(exp_text) || exp_text.size() > 4) return fail();
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view whole = mantissa;
  std::string_view frac;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    whole = mantissa.substr(0, dot);
    frac = mantissa.substr(dot + 1);
  }
  if (whole.empty() && frac.empty()) return fail();
  if (!whole.empty() && !detail::all_digits(whole)) return fail();
  if (!frac.empty() && !detail::all_digits(frac)) return fail();

  BigInt digits = detail::parse_digits(std::string(whole) + std::string(frac));
  long scale = static_cast<long>(frac.size()) - exponent;
  if (scale > 1000 || scale < -1000) return fail();
  Rational r = scale >= 0 ? Rational(digits, detail::pow10(static_cast<unsigned>(scale)))
                          : Rational(digits * detail::pow10(static_cast<unsigned>(-scale)));
  return negative ? Rational(-r) : r;
}

// Canonical text form: a terminating decimal with no trailing zeros when the
// reduced denominator is 2^a 5^b, otherwise "p/q".
inline std::string format_rational(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;

  BigInt rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }

  std::string out = negative ? "-" : "";
  if (rest != 1) {
    out += num.str() + "/" + den.str();
    return out;
  }
  const unsigned places = std::max(twos, fives);
  BigInt scaled = num * detail::pow10(places) / den;
  std::string digits = scaled.str();
  if (places == 0) return out + digits;
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return out + digits;
}

inline Time parse_time(std::string_view text) { return parse_rational(text); }
inline std::string format_time(const Time& t) { return format_rational(t); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace rbc
