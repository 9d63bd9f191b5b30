#pragma once

#include <concepts>
#include <string>

#include "nacap/errors.hpp"
#include "nacap/levi_civita.hpp"
#include "nacap/literal.hpp"
#include "nacap/rational.hpp"
#include "nacap/rational_function.hpp"

namespace nacap {

/// Uniform access to the scalar fields the graph algorithms run over.
template <class F>
struct FieldOps;

template <>
struct FieldOps<Rational> {
  static constexpr const char* name = "rational";
  static int sign(const Rational& x) { return sgn(x); }
  static bool is_exact_zero(const Rational& x) { return x == 0; }
  static ExtRational valuation(const Rational& x) {
    if (x == 0) return std::nullopt;
    return Rational(0);
  }
  static ExtRational guarantee(const Rational&) { return std::nullopt; }
  static bool approx_equal(const Rational& x, const Rational& y) { return x == y; }
  static bool le_within_guarantee(const Rational& x, const Rational& y) { return x <= y; }
  static std::string format(const Rational& x) { return x.get_str(); }
  static Rational from_rational(const Rational& q) { return q; }
  /// Only exponent 0 exists in Q.
  static Rational monomial(const Rational& coefficient, const Rational& exponent) {
    if (exponent != 0) throw PreconditionFailed("the rational field has no eps^" + exponent.get_str());
    return coefficient;
  }
  /// Drops everything known only up to eps^g; identity on exact fields.
  static Rational with_guarantee(const Rational& x, const ExtRational&) { return x; }
};

template <>
struct FieldOps<LCElement> {
  static constexpr const char* name = "levi-civita";
  static int sign(const LCElement& x) { return x.sign(); }
  static bool is_exact_zero(const LCElement& x) { return x.is_exact_zero(); }
  static ExtRational valuation(const LCElement& x) { return x.valuation(); }
  static ExtRational guarantee(const LCElement& x) { return x.guarantee(); }
  static bool approx_equal(const LCElement& x, const LCElement& y) { return nacap::approx_equal(x, y); }
  static bool le_within_guarantee(const LCElement& x, const LCElement& y) {
    return nacap::le_within_guarantee(x, y);
  }
  static std::string format(const LCElement& x) { return nacap::format(x); }
  static LCElement from_rational(const Rational& q) { return q; }
  static LCElement monomial(const Rational& coefficient, const Rational& exponent) {
    return LCElement::monomial(coefficient, exponent);
  }
  static LCElement with_guarantee(const LCElement& x, const ExtRational& g) {
    if (!g) return x;
    return x + LCElement::zero_like(*g);
  }
};

template <>
struct FieldOps<RFElement> {
  static constexpr const char* name = "rational-function";
  static int sign(const RFElement& x) { return x.sign(); }
  static bool is_exact_zero(const RFElement& x) { return x.is_zero(); }
  static ExtRational valuation(const RFElement& x) { return x.valuation(); }
  static ExtRational guarantee(const RFElement&) { return std::nullopt; }
  static bool approx_equal(const RFElement& x, const RFElement& y) { return x == y; }
  static bool le_within_guarantee(const RFElement& x, const RFElement& y) { return x <= y; }
  static std::string format(const RFElement& x) { return nacap::format(x); }
  static RFElement from_rational(const Rational& q) { return q; }
  /// coefficient * r^exponent; the exponent must be an integer.
  static RFElement monomial(const Rational& coefficient, const Rational& exponent) {
    if (!is_integer(exponent) || !exponent.get_num().fits_slong_p()) {
      throw PreconditionFailed("rational functions need integer powers, got r^" + exponent.get_str());
    }
    return RFElement::monomial(coefficient, exponent.get_num().get_si());
  }
  static RFElement with_guarantee(const RFElement& x, const ExtRational&) { return x; }
};

template <class F>
concept OrderedField = requires(const F& a, const F& b, const Rational& q) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { FieldOps<F>::sign(a) } -> std::convertible_to<int>;
  { FieldOps<F>::is_exact_zero(a) } -> std::convertible_to<bool>;
  { FieldOps<F>::valuation(a) } -> std::convertible_to<ExtRational>;
  { FieldOps<F>::from_rational(q) } -> std::convertible_to<F>;
};

/// Sign of x, or nullopt when it cannot be certified at the current precision.
template <OrderedField F>
std::optional<int> try_sign(const F& x) {
  try {
    return FieldOps<F>::sign(x);
  } catch (const PrecisionExhausted&) {
    return std::nullopt;
  }
}

template <OrderedField F>
bool certified_positive(const F& x) {
  const auto s = try_sign(x);
  return s && *s > 0;
}

template <OrderedField F>
bool certified_nonzero(const F& x) {
  const auto s = try_sign(x);
  return s && *s != 0;
}

/// Larger of two elements; throws PrecisionExhausted if undecidable.
template <OrderedField F>
const F& field_max(const F& a, const F& b) {
  return FieldOps<F>::sign(b - a) > 0 ? b : a;
}

namespace detail {

/// Larger of the two; a tie within the guarantee keeps `current` with the
/// guarantee of the difference.
template <OrderedField F>
void keep_max(F& current, const F& candidate) {
  const F diff = candidate - current;
  const auto s = try_sign(diff);
  if (!s) {
    current = FieldOps<F>::with_guarantee(current, FieldOps<F>::guarantee(diff));
  } else if (*s > 0) {
    current = candidate;
  }
}

}  // namespace detail

}  // namespace nacap
