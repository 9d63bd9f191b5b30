#pragma once

#include <cctype>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "nacap/errors.hpp"
#include "nacap/levi_civita.hpp"
#include "nacap/rational.hpp"
#include "nacap/rational_function.hpp"

// Literal syntax for field elements.
//
//   element  := term (("+" | "-") term)*
//   term     := rational | rational "*" eps | eps
//   eps      := "e" "^" "(" rational ")"
//   rational := ["-"] digits ["/" digits]
//
// Rational-function literals use the same shape with "r" in place of "e"
// (integer powers, "r" alone meaning r^(1)), either as a bare polynomial or
// as "(poly)/(poly)".

namespace nacap {

namespace detail {

class LiteralScanner {
 public:
  LiteralScanner(const std::string& text, char variable) : text_(text), var_(variable) {}

  /// Parses `element` into (exponent, coefficient) pairs in input order.
  std::vector<Term> element() {
    std::vector<Term> out;
    starts_.clear();
    skip_space();
    starts_.push_back(pos_);
    out.push_back(term());
    for (;;) {
      skip_space();
      if (at_end() || peek() == ')') break;
      const char op = peek();
      if (op != '+' && op != '-') throw ParseError("expected '+' or '-'", pos_);
      ++pos_;
      skip_space();
      starts_.push_back(pos_);
      Term t = term();
      if (op == '-') t.coefficient = -t.coefficient;
      out.push_back(std::move(t));
    }
    return out;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t position() const { return pos_; }
  /// Start offsets of the terms read by the last element() call.
  const std::vector<std::size_t>& term_starts() const { return starts_; }

  void expect(char c) {
    skip_space();
    if (at_end() || peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

 private:
  Term term() {
    if (at_end()) throw ParseError("expected term", pos_);
    if (peek() == var_) return {power(), Rational(1)};
    Rational coef = parse_rational_token(text_, pos_);
    skip_space();
    if (!at_end() && peek() == '*') {
      ++pos_;
      skip_space();
      if (at_end() || peek() != var_) throw ParseError(std::string("expected '") + var_ + "'", pos_);
      return {power(), std::move(coef)};
    }
    return {Rational(0), std::move(coef)};
  }

  Rational power() {
    ++pos_;  // the variable letter
    skip_space();
    if (at_end() || peek() != '^') {
      if (var_ == 'r') return Rational(1);
      throw ParseError("expected '^'", pos_);
    }
    ++pos_;
    expect('(');
    skip_space();
    Rational q = parse_rational_token(text_, pos_);
    expect(')');
    return q;
  }

  const std::string& text_;
  char var_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> starts_;
};

inline void reject_duplicates(const std::vector<Term>& terms, const std::vector<std::size_t>& starts) {
  for (std::size_t j = 1; j < terms.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (terms[i].exponent == terms[j].exponent) {
        throw ParseError("duplicate exponent " + to_string(terms[j].exponent), starts[j]);
      }
    }
  }
}

inline std::string format_terms(const std::vector<Term>& terms, const std::string& var) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    Rational c = t.coefficient;
    if (i > 0) {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    out += c.get_str();
    if (t.exponent != 0) out += "*" + var + "^(" + t.exponent.get_str() + ")";
  }
  return out;
}

inline Polynomial polynomial_from_terms(const std::vector<Term>& terms, std::size_t offset) {
  std::vector<Rational> c;
  for (const auto& t : terms) {
    if (!is_integer(t.exponent) || t.exponent < 0) {
      throw ParseError("rational-function powers must be nonnegative integers", offset);
    }
    const std::size_t k = t.exponent.get_num().get_ui();
    if (c.size() <= k) c.resize(k + 1, Rational(0));
    c[k] += t.coefficient;
  }
  return Polynomial(std::move(c));
}

inline std::vector<Term> polynomial_terms(const Polynomial& p) {
  std::vector<Term> out;
  const auto& c = p.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) out.push_back({Rational(static_cast<unsigned long>(i)), c[i]});
  }
  return out;
}

}  // namespace detail

/// Parses an exact Levi-Civita literal.
inline LCElement parse_lc(const std::string& text) {
  detail::LiteralScanner scan(text, 'e');
  std::vector<Term> terms = scan.element();
  scan.skip_space();
  if (!scan.at_end()) throw ParseError("unexpected character", scan.position());
  detail::reject_duplicates(terms, scan.term_starts());
  return LCElement::from_terms(std::move(terms));
}

/// Canonical literal of the stored terms (ascending exponents). The
/// guarantee exponent is not part of the literal.
inline std::string format(const LCElement& x) { return detail::format_terms(x.terms(), "e"); }

inline std::ostream& operator<<(std::ostream& os, const LCElement& x) {
  os << format(x);
  if (x.guarantee()) os << " [G=" << x.guarantee()->get_str() << "]";
  return os;
}

inline RFElement parse_rf(const std::string& text) {
  detail::LiteralScanner scan(text, 'r');
  scan.skip_space();
  if (!scan.at_end() && scan.peek() == '(') {
    scan.expect('(');
    const std::size_t num_at = scan.position();
    auto num = scan.element();
    detail::reject_duplicates(num, scan.term_starts());
    scan.expect(')');
    scan.expect('/');
    scan.expect('(');
    const std::size_t den_at = scan.position();
    auto den = scan.element();
    detail::reject_duplicates(den, scan.term_starts());
    scan.expect(')');
    scan.skip_space();
    if (!scan.at_end()) throw ParseError("unexpected character", scan.position());
    Polynomial d = detail::polynomial_from_terms(den, den_at);
    if (d.is_zero()) throw ParseError("zero denominator", den_at);
    return {detail::polynomial_from_terms(num, num_at), std::move(d)};
  }
  auto num = scan.element();
  detail::reject_duplicates(num, scan.term_starts());
  scan.skip_space();
  if (!scan.at_end()) throw ParseError("unexpected character", scan.position());
  return {detail::polynomial_from_terms(num, 0), Polynomial(1)};
}

inline std::string format(const RFElement& g) {
  const std::string num = detail::format_terms(detail::polynomial_terms(g.numerator()), "r");
  if (g.denominator() == Polynomial(1)) return num;
  return "(" + num + ")/(" + detail::format_terms(detail::polynomial_terms(g.denominator()), "r") + ")";
}

inline std::ostream& operator<<(std::ostream& os, const RFElement& g) { return os << format(g); }

inline std::string format(const Rational& q) { return q.get_str(); }

}  // namespace nacap
