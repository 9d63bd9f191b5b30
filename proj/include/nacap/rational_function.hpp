#pragma once

#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

#include "nacap/errors.hpp"
#include "nacap/levi_civita.hpp"
#include "nacap/rational.hpp"

namespace nacap {

/// Dense polynomial in r over Q. coefficients()[i] multiplies r^i; no
/// trailing zeros, so the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }
  Polynomial(const Rational& constant) {  // NOLINT(google-explicit-constructor)
    if (constant != 0) c_.push_back(constant);
  }

  static Polynomial monomial(const Rational& coefficient, std::size_t power) {
    std::vector<Rational> c(power + 1, Rational(0));
    c[power] = coefficient;
    return Polynomial(std::move(c));
  }

  const std::vector<Rational>& coefficients() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const Rational& leading() const { return c_.back(); }

  /// Index of the lowest nonzero coefficient. Undefined for zero.
  std::size_t lowest_power() const {
    std::size_t i = 0;
    while (c_[i] == 0) ++i;
    return i;
  }
  const Rational& lowest_coefficient() const { return c_[lowest_power()]; }

  Rational evaluate(const Rational& r) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
  }
  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& x : out.c_) x = -x;
    return out;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(c));
  }
  Polynomial scaled(const Rational& s) const {
    Polynomial out = *this;
    for (auto& x : out.c_) x *= s;
    out.trim();
    return out;
  }

  /// Euclidean division: returns (quotient, remainder).
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<Rational> rem = a.c_;
    const long db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
    for (long k = a.degree() - db; k >= 0; --k) {
      const Rational f = rem[static_cast<std::size_t>(k + db)] / b.leading();
      q[static_cast<std::size_t>(k)] = f;
      if (f == 0) continue;
      for (long j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
  }

  /// Monic greatest common divisor (zero only if both inputs are zero).
  static Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      Polynomial r = divmod(a, b).second;
      a = std::move(b);
      b = r.is_zero() ? r : r.scaled(1 / r.leading());
    }
    return a.is_zero() ? a : a.scaled(1 / a.leading());
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Element of Q(r) in lowest terms with the denominator's lowest-order
/// coefficient normalized to 1. The order is the one inherited from the
/// embedding r -> eps: g > 0 iff the ratio of lowest-order coefficients of
/// numerator and denominator is positive.
class RFElement {
 public:
  RFElement() : den_(Rational(1)) {}
  RFElement(long value) : RFElement(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  RFElement(const Rational& value) : num_(value), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
  RFElement(Polynomial numerator, Polynomial denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    normalize();
  }

  /// coefficient * r^power for any integer power.
  static RFElement monomial(const Rational& coefficient, long power) {
    if (power >= 0) return {Polynomial::monomial(coefficient, static_cast<std::size_t>(power)), Polynomial(1)};
    return {Polynomial(coefficient), Polynomial::monomial(1, static_cast<std::size_t>(-power))};
  }
  static RFElement r() { return monomial(1, 1); }

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  int sign() const { return is_zero() ? 0 : sgn(num_.lowest_coefficient() / den_.lowest_coefficient()); }

  /// Order of vanishing at r = 0; nullopt for zero.
  ExtRational valuation() const {
    if (is_zero()) return std::nullopt;
    return Rational(static_cast<long>(num_.lowest_power()) - static_cast<long>(den_.lowest_power()));
  }

  Rational evaluate(const Rational& r0) const {
    const Rational d = den_.evaluate(r0);
    if (d == 0) throw DomainError("rational function has a pole at r = " + to_string(r0));
    return num_.evaluate(r0) / d;
  }

  /// Power-series expansion at r = 0 with eps := r, truncated by the current
  /// precision policy.
  LCElement embed() const {
    if (is_zero()) return {};
    return to_lc(num_) / to_lc(den_);
  }

  RFElement operator-() const { return {-num_, den_}; }
  friend RFElement operator+(const RFElement& a, const RFElement& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend RFElement operator-(const RFElement& a, const RFElement& b) { return a + (-b); }
  friend RFElement operator*(const RFElement& a, const RFElement& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  RFElement inverse() const {
    if (is_zero()) throw DomainError("inverse of zero rational function");
    return {den_, num_};
  }
  friend RFElement operator/(const RFElement& a, const RFElement& b) { return a * b.inverse(); }

  RFElement& operator+=(const RFElement& b) { return *this = *this + b; }
  RFElement& operator-=(const RFElement& b) { return *this = *this - b; }
  RFElement& operator*=(const RFElement& b) { return *this = *this * b; }
  RFElement& operator/=(const RFElement& b) { return *this = *this / b; }

  friend bool operator==(const RFElement& a, const RFElement& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering compare(const RFElement& a, const RFElement& b) {
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator<(const RFElement& a, const RFElement& b) { return compare(a, b) < 0; }
  friend bool operator>(const RFElement& a, const RFElement& b) { return compare(a, b) > 0; }
  friend bool operator<=(const RFElement& a, const RFElement& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const RFElement& a, const RFElement& b) { return compare(a, b) >= 0; }

 private:
  static LCElement to_lc(const Polynomial& p) {
    std::vector<Term> terms;
    const auto& c = p.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0) terms.push_back({Rational(static_cast<unsigned long>(i)), c[i]});
    }
    return LCElement::from_terms(std::move(terms));
  }

  void normalize() {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    const Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = Polynomial::divmod(num_, g).first;
      den_ = Polynomial::divmod(den_, g).first;
    }
    const Rational s = 1 / den_.lowest_coefficient();
    num_ = num_.scaled(s);
    den_ = den_.scaled(s);
  }

  Polynomial num_;
  Polynomial den_;
};

inline RFElement pow(const RFElement& x, unsigned long n) {
  RFElement out(1);
  for (unsigned long i = 0; i < n; ++i) out *= x;
  return out;
}

}  // namespace nacap
