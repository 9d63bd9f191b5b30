#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

#include "nacap/errors.hpp"
#include "nacap/precision.hpp"
#include "nacap/rational.hpp"

namespace nacap {

/// One summand a * eps^q of a Levi-Civita series.
struct Term {
  Rational exponent;
  Rational coefficient;

  friend bool operator==(const Term& a, const Term& b) {
    return a.exponent == b.exponent && a.coefficient == b.coefficient;
  }
};

enum class Magnitude { zero, infinitesimal, finite_nonzero_standard_part, infinitely_large };

/// Element of the Levi-Civita field, stored as a finite truncation
/// sum_i a_i eps^{q_i} together with a guarantee exponent G.
///
/// Invariant: the stored terms are exactly the terms of the represented
/// element with exponent < G. Nothing is known about exponents >= G. An
/// exact element has G = +infinity. An element with no terms and finite G
/// is "zero-like": it is zero up to eps^G but its sign is unknown.
class LCElement {
 public:
  LCElement() = default;
  LCElement(long value) : LCElement(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  LCElement(const Rational& value) {                     // NOLINT(google-explicit-constructor)
    if (value != 0) terms_.push_back({Rational(0), value});
  }

  /// coefficient * eps^exponent, exact.
  static LCElement monomial(const Rational& coefficient, const Rational& exponent) {
    LCElement out;
    if (coefficient != 0) out.terms_.push_back({exponent, coefficient});
    return out;
  }

  static LCElement epsilon(const Rational& exponent = 1) { return monomial(1, exponent); }

  /// Builds an element from arbitrary terms: sorts, merges equal exponents,
  /// drops zero coefficients, then applies the current truncation policy.
  static LCElement from_terms(std::vector<Term> terms, ExtRational guarantee = std::nullopt) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    std::vector<Term> merged;
    for (auto& t : terms) {
      if (!merged.empty() && merged.back().exponent == t.exponent) {
        merged.back().coefficient += t.coefficient;
      } else {
        merged.push_back(std::move(t));
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coefficient == 0; });
    return truncate(std::move(merged), std::move(guarantee));
  }

  /// An element known only to vanish below eps^guarantee.
  static LCElement zero_like(const Rational& guarantee) {
    LCElement out;
    out.guarantee_ = guarantee;
    return out;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const ExtRational& guarantee() const noexcept { return guarantee_; }

  bool is_exact() const noexcept { return !guarantee_.has_value(); }
  bool is_exact_zero() const noexcept { return terms_.empty() && !guarantee_; }
  /// No nonzero term is known (exact zero or zero-like).
  bool is_zero_like() const noexcept { return terms_.empty(); }

  /// Least exponent with a nonzero coefficient; +infinity (nullopt) when no
  /// term is known.
  ExtRational valuation() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exponent;
  }

  /// Lower bound on the true valuation: the leading exponent, or G for a
  /// zero-like element. Undefined (nullopt) only for exact zero.
  ExtRational valuation_lower_bound() const {
    if (!terms_.empty()) return terms_.front().exponent;
    return guarantee_;
  }

  /// Width of the certified part above the valuation (G - valuation);
  /// nullopt when exact or when no term is known.
  ExtRational relative_precision() const {
    if (!guarantee_ || terms_.empty()) return std::nullopt;
    return Rational(*guarantee_ - terms_.front().exponent);
  }

  Rational coefficient_at(const Rational& exponent) const {
    for (const auto& t : terms_) {
      if (t.exponent == exponent) return t.coefficient;
      if (t.exponent > exponent) break;
    }
    if (guarantee_ && exponent >= *guarantee_) {
      throw PrecisionExhausted("coefficient requested beyond guarantee exponent");
    }
    return 0;
  }

  /// -1, 0 or +1. Throws PrecisionExhausted for a zero-like element.
  int sign() const {
    if (!terms_.empty()) return sgn(terms_.front().coefficient);
    if (!guarantee_) return 0;
    throw PrecisionExhausted("sign undecidable: element vanishes below eps^" + to_string(guarantee_));
  }

  Magnitude magnitude() const {
    if (terms_.empty()) {
      if (!guarantee_) return Magnitude::zero;
      throw PrecisionExhausted("magnitude undecidable: element vanishes below eps^" +
                               to_string(guarantee_));
    }
    const int s = sgn(terms_.front().exponent);
    if (s > 0) return Magnitude::infinitesimal;
    if (s < 0) return Magnitude::infinitely_large;
    return Magnitude::finite_nonzero_standard_part;
  }

  LCElement operator-() const {
    LCElement out = *this;
    for (auto& t : out.terms_) t.coefficient = -t.coefficient;
    return out;
  }

  friend LCElement operator+(const LCElement& x, const LCElement& y) {
    if (y.is_exact_zero()) return x;
    if (x.is_exact_zero()) return y;
    ExtRational g = ext_min(x.guarantee_, y.guarantee_);
    std::vector<Term> out;
    out.reserve(x.terms_.size() + y.terms_.size());
    auto i = x.terms_.begin();
    auto j = y.terms_.begin();
    const auto push = [&](const Rational& e, Rational c) {
      if (c != 0) out.push_back({e, std::move(c)});
    };
    while (i != x.terms_.end() || j != y.terms_.end()) {
      const Rational* e;
      if (j == y.terms_.end() || (i != x.terms_.end() && i->exponent < j->exponent)) {
        e = &i->exponent;
        if (!ext_less(*e, g)) break;
        push(*e, i->coefficient);
        ++i;
      } else if (i == x.terms_.end() || j->exponent < i->exponent) {
        e = &j->exponent;
        if (!ext_less(*e, g)) break;
        push(*e, j->coefficient);
        ++j;
      } else {
        e = &i->exponent;
        if (!ext_less(*e, g)) break;
        push(*e, Rational(i->coefficient + j->coefficient));
        ++i;
        ++j;
      }
    }
    return truncate(std::move(out), std::move(g));
  }

  friend LCElement operator-(const LCElement& x, const LCElement& y) { return x + (-y); }

  friend LCElement operator*(const LCElement& x, const LCElement& y) {
    if (x.is_exact_zero() || y.is_exact_zero()) return {};
    const Rational lx = *x.valuation_lower_bound();
    const Rational ly = *y.valuation_lower_bound();
    ExtRational g = ext_min(ext_add(x.guarantee_, ly), ext_add(y.guarantee_, lx));
    if (x.terms_.empty() || y.terms_.empty()) return LCElement({}, std::move(g));

    const Rational window_top = lx + ly + current_precision().window;
    const ExtRational cut = ext_min(g, window_top);
    bool window_dropped = false;
    std::vector<Term> products;
    products.reserve(x.terms_.size() * std::min<std::size_t>(y.terms_.size(), 8));
    Rational e;
    for (const auto& a : x.terms_) {
      for (const auto& b : y.terms_) {
        e = a.exponent + b.exponent;
        if (!ext_less(e, cut)) {
          if (ext_less(e, g)) window_dropped = true;
          break;
        }
        products.push_back({e, Rational(a.coefficient * b.coefficient)});
      }
    }
    if (window_dropped) g = ext_min(g, window_top);
    return from_terms(std::move(products), std::move(g));
  }

  /// Multiplicative inverse via x = a0 eps^q0 (1 + h) and a truncated
  /// geometric series in -h.
  LCElement inverse() const {
    if (terms_.empty()) {
      if (!guarantee_) throw DomainError("inverse of zero");
      throw PrecisionExhausted("inverse of an element that vanishes below eps^" +
                               to_string(guarantee_));
    }
    const Rational q0 = terms_.front().exponent;
    const Rational inv_a0 = 1 / terms_.front().coefficient;
    const ExtRational relative_g = ext_add(guarantee_, -q0);

    std::vector<Term> neg_h;
    neg_h.reserve(terms_.size());
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      neg_h.push_back({Rational(terms_[i].exponent - q0), Rational(-terms_[i].coefficient * inv_a0)});
    }
    if (neg_h.empty()) {
      return LCElement({{Rational(-q0), inv_a0}}, ext_add(relative_g, -q0));
    }

    const auto& cfg = current_precision();
    const Rational d = neg_h.front().exponent;
    Rational target = cfg.window;
    if (relative_g && *relative_g < target) target = *relative_g;
    const mpz_class needed_z = nacap::ceil(target / d);
    std::size_t needed = needed_z.fits_ulong_p() ? needed_z.get_ui() : cfg.geometric_series_depth;
    needed = std::max<std::size_t>(1, std::min(needed, cfg.geometric_series_depth));
    std::size_t depth = 1;
    while (depth < needed) depth *= 2;

    // sum_{k < depth} (-h)^k = prod_i (1 + (-h)^{2^i})
    LCElement power = truncate(std::move(neg_h), relative_g);
    LCElement series(1);
    for (std::size_t len = 1; len < depth; len *= 2) {
      series = series * (LCElement(1) + power);
      if (len * 2 < depth) power = power * power;
    }
    ExtRational g = ext_min(series.guarantee_, Rational(d * static_cast<unsigned long>(depth)));

    std::vector<Term> out;
    out.reserve(series.terms_.size());
    for (const auto& t : series.terms_) {
      out.push_back({Rational(t.exponent - q0), Rational(t.coefficient * inv_a0)});
    }
    return truncate(std::move(out), ext_add(g, -q0));
  }

  friend LCElement operator/(const LCElement& x, const LCElement& y) { return x * y.inverse(); }

  LCElement& operator+=(const LCElement& y) { return *this = *this + y; }
  LCElement& operator-=(const LCElement& y) { return *this = *this - y; }
  LCElement& operator*=(const LCElement& y) { return *this = *this * y; }
  LCElement& operator/=(const LCElement& y) { return *this = *this / y; }

  /// Structural identity: same terms and same guarantee.
  friend bool operator==(const LCElement& x, const LCElement& y) {
    return x.guarantee_ == y.guarantee_ && x.terms_ == y.terms_;
  }

  /// Certified order. Throws PrecisionExhausted when x - y is zero-like
  /// with a finite guarantee.
  friend std::strong_ordering compare(const LCElement& x, const LCElement& y) {
    const int s = (x - y).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend bool operator<(const LCElement& x, const LCElement& y) { return compare(x, y) < 0; }
  friend bool operator>(const LCElement& x, const LCElement& y) { return compare(x, y) > 0; }
  friend bool operator<=(const LCElement& x, const LCElement& y) { return compare(x, y) <= 0; }
  friend bool operator>=(const LCElement& x, const LCElement& y) { return compare(x, y) >= 0; }

 private:
  LCElement(std::vector<Term> terms, ExtRational guarantee)
      : terms_(std::move(terms)), guarantee_(std::move(guarantee)) {}

  /// Applies the guarantee cut, the relative window and the term cap to a
  /// sorted, zero-free term list.
  static LCElement truncate(std::vector<Term> terms, ExtRational guarantee) {
    if (guarantee) {
      auto it = std::find_if(terms.begin(), terms.end(),
                             [&](const Term& t) { return t.exponent >= *guarantee; });
      terms.erase(it, terms.end());
    }
    if (terms.empty()) return LCElement(std::move(terms), std::move(guarantee));
    const auto& cfg = current_precision();
    const Rational cutoff = terms.front().exponent + cfg.window;
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const Term& t) { return t.exponent >= cutoff; });
    if (it != terms.end()) {
      terms.erase(it, terms.end());
      guarantee = ext_min(guarantee, cutoff);
    }
    if (terms.size() > cfg.max_terms) {
      guarantee = ext_min(guarantee, terms[cfg.max_terms].exponent);
      terms.resize(cfg.max_terms);
    }
    return LCElement(std::move(terms), std::move(guarantee));
  }

  std::vector<Term> terms_;
  ExtRational guarantee_;
};

inline LCElement pow(const LCElement& x, unsigned long n) {
  LCElement result(1);
  LCElement base = x;
  while (n > 0) {
    if (n & 1UL) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

inline LCElement abs(const LCElement& x) { return x.sign() < 0 ? -x : x; }

/// x and y agree on every exponent below both guarantees.
inline bool approx_equal(const LCElement& x, const LCElement& y) { return (x - y).is_zero_like(); }

/// x <= y, where agreement within guarantee counts as equality.
inline bool le_within_guarantee(const LCElement& x, const LCElement& y) {
  const LCElement d = y - x;
  return d.is_zero_like() || d.sign() > 0;
}

}  // namespace nacap
