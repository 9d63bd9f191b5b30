#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>

#include "nacap/errors.hpp"

namespace nacap {

/// Arbitrary-precision rational, always kept in canonical form
/// (denominator > 0, gcd(|num|, den) = 1).
using Rational = mpq_class;

/// Rational or +infinity. An empty optional is +infinity.
using ExtRational = std::optional<Rational>;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) {
    throw DomainError("rational with zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const ExtRational& q) { return q ? q->get_str() : std::string("inf"); }

/// min over extended rationals, treating nullopt as +infinity.
inline ExtRational ext_min(const ExtRational& a, const ExtRational& b) {
  if (!a) return b;
  if (!b) return a;
  return *a < *b ? a : b;
}

inline ExtRational ext_add(const ExtRational& a, const Rational& b) {
  if (!a) return std::nullopt;
  return Rational(*a + b);
}

inline bool ext_less(const Rational& a, const ExtRational& b) { return !b || a < *b; }
inline bool ext_less(const ExtRational& a, const ExtRational& b) { return a && ext_less(*a, b); }

/// Smallest integer >= q.
inline mpz_class ceil(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational pow(const Rational& base, unsigned long exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

inline Rational factorial(unsigned long k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return Rational(f);
}

/// Parses `["-"] digits ["/" digits]` starting at `pos`; advances `pos`.
inline Rational parse_rational_token(const std::string& text, std::size_t& pos) {
  const std::size_t start = pos;
  std::string token;
  if (pos < text.size() && text[pos] == '-') {
    token.push_back('-');
    ++pos;
  }
  const auto read_digits = [&](std::string& out) {
    const std::size_t begin = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      out.push_back(text[pos++]);
    }
    if (pos == begin) {
      throw ParseError("expected digits", pos);
    }
  };
  read_digits(token);
  if (pos < text.size() && text[pos] == '/') {
    token.push_back('/');
    ++pos;
    std::string den;
    read_digits(den);
    if (den.find_first_not_of('0') == std::string::npos) {
      throw ParseError("zero denominator", start);
    }
    token += den;
  }
  Rational q(token, 10);
  q.canonicalize();
  return q;
}

/// Parses a complete rational string such as "-3/4".
inline Rational parse_rational(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == ' ') ++pos;
  Rational q = parse_rational_token(text, pos);
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos != text.size()) {
    throw ParseError("trailing characters after rational", pos);
  }
  return q;
}

}  // namespace nacap
