#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <string>
#include <string_view>

#include "stackdel/error.hpp"

namespace stackdel {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// 2^k for any integer k, exactly.
inline Rational pow2(int k) {
  Integer p = Integer(1) << std::abs(k);
  return k >= 0 ? Rational(p) : Rational(Integer(1), p);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Every finite double is a dyadic rational, so this is exact.
inline Rational from_double(double x) { return Rational(x); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_fraction(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal rendering with `digits` significant digits.
inline std::string to_decimal(const Rational& r, int digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_100;
  Dec v = Dec(numerator(r)) / Dec(denominator(r));
  return v.str(digits);
}

/// Accepts "p", "p/q" and plain decimals such as "-0.125"; all parsed exactly.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorCode::kUsage, "not a rational number: '" + std::string(text) + "'");
  };
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    Integer v{std::string(s)};
    return neg ? Integer(-v) : v;
  };

  if (text.empty()) return bad();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') return bad();
    Integer d = to_int(den);
    if (d == 0) return bad();
    return Rational(to_int(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) return bad();
    if ((!whole.empty() && !is_int(whole)) || (!frac.empty() && !is_int(frac)) ||
        (!frac.empty() && (frac.front() == '-' || frac.front() == '+')))
      return bad();
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    Integer digits = (whole.empty() ? Integer(0) : to_int(whole)) * scale +
                     (frac.empty() ? Integer(0) : to_int(frac));
    Rational r(digits, scale);
    return neg ? Rational(-r) : r;
  }
  if (!is_int(text)) return bad();
  return Rational(to_int(text));
}

}  // namespace stackdel
