#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cirelax {

/// Arbitrary-precision rational.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

/// Parses `num/den`, an integer, or a plain decimal such as `0.125` into an
/// exact rational. Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string s(text);
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s, 10);
      if (q.get_den() == 0) return std::nullopt;
      q.canonicalize();
      return q;
    }
    bool negative = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
      negative = s[0] == '-';
      i = 1;
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '.' && !seen_point) {
        seen_point = true;
      } else if (c >= '0' && c <= '9') {
        digits += c;
        if (seen_point) ++frac_digits;
      } else {
        return std::nullopt;
      }
    }
    if (digits.empty()) return std::nullopt;
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (int k = 0; k < frac_digits; ++k) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    if (negative) q = -q;
    return q;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

/// If q == 2^-k for some integer k >= 0, returns k.
inline std::optional<unsigned long> inverse_power_of_two(const Rational& q) {
  if (q.get_num() != 1) return std::nullopt;
  const mpz_class& den = q.get_den();
  if (den <= 0) return std::nullopt;
  const auto bit = mpz_scan1(den.get_mpz_t(), 0);
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;
  return static_cast<unsigned long>(bit);
}

/// 12 significant digits; always shows a decimal point so integers read as `1.0`.
inline std::string format_bits(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string out(buf);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

}  // namespace cirelax
