#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nacap/errors.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/rational.hpp"

namespace nacap {

/// Asymptotic behaviour of k -> valuation(w(k)).
///   to_plus_infinity:  unbounded above along a subsequence (w -> 0 there)
///   to_minus_infinity: tends to -infinity (w -> infinity)
///   bounded:           bounded above, and bounded below infinitely often
enum class ValuationTrend { to_plus_infinity, to_minus_infinity, bounded };

inline const char* to_string(ValuationTrend t) {
  switch (t) {
    case ValuationTrend::to_plus_infinity: return "to_plus_infinity";
    case ValuationTrend::to_minus_infinity: return "to_minus_infinity";
    case ValuationTrend::bounded: return "bounded";
  }
  return "?";
}

/// Symbolic sequence k -> w(k) > 0, k = 0, 1, 2, ...
///
/// A rule is a finite prefix of explicit values followed by a tail which is
/// either a monomial c * (k!)^p * eps^(alpha*k + beta), the sequence
/// eps^(1/2^k), a repeating cycle of explicit values, or a user callable with
/// declared valuation metadata. Tails are indexed by the absolute k.
template <OrderedField F>
class WeightRule {
 public:
  enum class Tail { monomial, half_power, cycle, custom };

  struct CustomTail {
    std::function<F(std::size_t)> value;
    std::function<Rational(std::size_t)> valuation;
    ValuationTrend trend = ValuationTrend::bounded;
    /// sup of the valuation over the tail (required unless trend is to_plus_infinity).
    std::optional<Rational> valuation_sup;
    /// A level the valuation stays at or above infinitely often (bounded trend).
    std::optional<Rational> valuation_inf;
    std::string description = "custom";
  };

  static WeightRule monomial(const Rational& coefficient, int factorial_power, const Rational& alpha,
                             const Rational& beta, std::string name = "monomial") {
    if (coefficient <= 0) throw PreconditionFailed("weight rule coefficient must be positive");
    if (factorial_power < -1 || factorial_power > 1) {
      throw PreconditionFailed("factorial power must be -1, 0 or 1");
    }
    WeightRule r;
    r.name_ = std::move(name);
    r.tail_ = Tail::monomial;
    r.coefficient_ = coefficient;
    r.factorial_power_ = factorial_power;
    r.alpha_ = alpha;
    r.beta_ = beta;
    return r;
  }
  static WeightRule constant(const Rational& c) { return monomial(c, 0, 0, 0, "const"); }
  /// c * eps^(k + shift)
  static WeightRule eps_pow_k(const Rational& c = 1, const Rational& shift = 0) {
    return monomial(c, 0, 1, shift, "eps_pow_k");
  }
  /// c * eps^(-k + shift)
  static WeightRule eps_pow_neg_k(const Rational& c = 1, const Rational& shift = 0) {
    return monomial(c, 0, -1, shift, "eps_pow_neg_k");
  }
  /// c * (k!)^p * eps^(alpha*k), p = +1 or -1.
  static WeightRule factorial_eps(int factorial_power, const Rational& alpha, const Rational& c = 1) {
    return monomial(c, factorial_power, alpha, 0, "factorial_eps");
  }
  static WeightRule eps_pow_half_pow_k() {
    WeightRule r;
    r.name_ = "eps_pow_half_pow_k";
    r.tail_ = Tail::half_power;
    return r;
  }
  static WeightRule periodic(std::vector<F> cycle) {
    if (cycle.empty()) throw PreconditionFailed("periodic rule needs at least one value");
    for (const auto& v : cycle) check_positive(v);
    WeightRule r;
    r.name_ = "periodic";
    r.tail_ = Tail::cycle;
    r.cycle_ = std::move(cycle);
    return r;
  }
  static WeightRule custom(CustomTail tail) {
    if (!tail.value || !tail.valuation) throw PreconditionFailed("custom rule needs value and valuation");
    if (tail.trend != ValuationTrend::to_plus_infinity && !tail.valuation_sup) {
      throw PreconditionFailed("custom rule with this trend needs valuation_sup");
    }
    WeightRule r;
    r.name_ = "custom";
    r.tail_ = Tail::custom;
    r.custom_ = std::make_shared<CustomTail>(std::move(tail));
    return r;
  }

  /// The same rule with w(k) replaced by prefix[k] for k < prefix.size().
  WeightRule with_prefix(std::vector<F> prefix) const {
    for (const auto& v : prefix) check_positive(v);
    WeightRule r = *this;
    r.prefix_ = std::move(prefix);
    r.name_ = "custom_list";
    return r;
  }

  F operator()(std::size_t k) const {
    if (k < prefix_.size()) return prefix_[k];
    switch (tail_) {
      case Tail::monomial: {
        Rational c = coefficient_;
        if (factorial_power_ == 1) c *= factorial(k);
        if (factorial_power_ == -1) c /= factorial(k);
        return FieldOps<F>::monomial(c, alpha_ * static_cast<unsigned long>(k) + beta_);
      }
      case Tail::half_power:
        return FieldOps<F>::monomial(1, half_pow(k));
      case Tail::cycle:
        return cycle_[(k - prefix_.size()) % cycle_.size()];
      case Tail::custom:
        return custom_->value(k);
    }
    throw Error("unreachable");
  }

  /// Exact valuation of w(k), from the symbolic form.
  Rational valuation(std::size_t k) const {
    if (k < prefix_.size()) return *FieldOps<F>::valuation(prefix_[k]);
    switch (tail_) {
      case Tail::monomial:
        if constexpr (std::is_same_v<F, Rational>) return 0;
        return alpha_ * static_cast<unsigned long>(k) + beta_;
      case Tail::half_power: return half_pow(k);
      case Tail::cycle: return *FieldOps<F>::valuation(cycle_[(k - prefix_.size()) % cycle_.size()]);
      case Tail::custom: return custom_->valuation(k);
    }
    throw Error("unreachable");
  }

  ValuationTrend trend() const {
    switch (tail_) {
      case Tail::monomial:
        if (alpha_ > 0) return ValuationTrend::to_plus_infinity;
        if (alpha_ < 0) return ValuationTrend::to_minus_infinity;
        return ValuationTrend::bounded;
      case Tail::half_power:
      case Tail::cycle: return ValuationTrend::bounded;
      case Tail::custom: return custom_->trend;
    }
    return ValuationTrend::bounded;
  }

  /// sup over all k of valuation(k); nullopt when unbounded.
  std::optional<Rational> valuation_sup() const {
    std::optional<Rational> tail;
    const std::size_t p = prefix_.size();
    switch (tail_) {
      case Tail::monomial:
        if (alpha_ > 0) return std::nullopt;
        tail = valuation(p);  // nonincreasing from k = p on
        break;
      case Tail::half_power: tail = half_pow(p); break;
      case Tail::cycle:
        for (std::size_t i = 0; i < cycle_.size(); ++i) tail = max_opt(tail, valuation(p + i));
        break;
      case Tail::custom:
        if (!custom_->valuation_sup) return std::nullopt;
        tail = custom_->valuation_sup;
        break;
    }
    for (std::size_t k = 0; k < p; ++k) tail = max_opt(tail, valuation(k));
    return tail;
  }

  /// A level L with valuation(k) >= L for infinitely many k (bounded trend only).
  std::optional<Rational> valuation_inf_often_lower() const {
    if (trend() != ValuationTrend::bounded) return std::nullopt;
    switch (tail_) {
      case Tail::monomial: return beta_;
      case Tail::half_power: return Rational(0);
      case Tail::cycle: {
        std::optional<Rational> lo;
        for (std::size_t i = 0; i < cycle_.size(); ++i) {
          const Rational v = valuation(prefix_.size() + i);
          if (!lo || v < *lo) lo = v;
        }
        return lo;
      }
      case Tail::custom: return custom_->valuation_inf;
    }
    return std::nullopt;
  }

  const std::string& name() const noexcept { return name_; }
  Tail tail_kind() const noexcept { return tail_; }
  std::size_t prefix_size() const noexcept { return prefix_.size(); }
  const std::vector<F>& prefix() const noexcept { return prefix_; }
  const std::vector<F>& cycle() const noexcept { return cycle_; }
  const Rational& alpha() const noexcept { return alpha_; }
  const Rational& beta() const noexcept { return beta_; }
  const Rational& coefficient() const noexcept { return coefficient_; }
  int factorial_power() const noexcept { return factorial_power_; }

  std::string describe() const {
    std::string tail;
    switch (tail_) {
      case Tail::monomial:
        tail = coefficient_.get_str();
        if (factorial_power_ == 1) tail += "*k!";
        if (factorial_power_ == -1) tail += "/k!";
        tail += "*e^(" + alpha_.get_str() + "*k + " + beta_.get_str() + ")";
        break;
      case Tail::half_power: tail = "e^(1/2^k)"; break;
      case Tail::cycle: {
        tail = "cycle[";
        for (std::size_t i = 0; i < cycle_.size(); ++i) {
          if (i) tail += ", ";
          tail += FieldOps<F>::format(cycle_[i]);
        }
        tail += "]";
        break;
      }
      case Tail::custom: tail = custom_->description; break;
    }
    if (prefix_.empty()) return tail;
    std::string out = "[";
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      if (i) out += ", ";
      out += FieldOps<F>::format(prefix_[i]);
    }
    return out + "] then " + tail;
  }

  /// Same symbolic rule with explicit values mapped into another field.
  template <OrderedField G, class Fn>
  WeightRule<G> map(Fn&& fn) const {
    WeightRule<G> out;
    out.name_ = name_;
    out.tail_ = static_cast<typename WeightRule<G>::Tail>(tail_);
    out.coefficient_ = coefficient_;
    out.factorial_power_ = factorial_power_;
    out.alpha_ = alpha_;
    out.beta_ = beta_;
    for (const auto& v : prefix_) out.prefix_.push_back(fn(v));
    for (const auto& v : cycle_) out.cycle_.push_back(fn(v));
    if (custom_) {
      typename WeightRule<G>::CustomTail t;
      auto src = custom_;
      t.value = [src, fn](std::size_t k) { return fn(src->value(k)); };
      t.valuation = src->valuation;
      t.trend = src->trend;
      t.valuation_sup = src->valuation_sup;
      t.valuation_inf = src->valuation_inf;
      t.description = src->description;
      out.custom_ = std::make_shared<typename WeightRule<G>::CustomTail>(std::move(t));
    }
    return out;
  }

 private:
  template <OrderedField>
  friend class WeightRule;

  WeightRule() = default;

  static Rational half_pow(std::size_t k) {
    mpz_class den = 1;
    den <<= static_cast<mp_bitcnt_t>(k);
    return Rational(mpz_class(1), den);
  }
  static std::optional<Rational> max_opt(const std::optional<Rational>& a, const Rational& b) {
    if (!a || *a < b) return b;
    return a;
  }
  static void check_positive(const F& v) {
    if (FieldOps<F>::sign(v) <= 0) {
      throw PreconditionFailed("weight " + FieldOps<F>::format(v) + " is not positive");
    }
  }

  std::string name_;
  std::vector<F> prefix_;
  Tail tail_ = Tail::monomial;
  Rational coefficient_ = 1;
  int factorial_power_ = 0;
  Rational alpha_ = 0;
  Rational beta_ = 0;
  std::vector<F> cycle_;
  std::shared_ptr<CustomTail> custom_;
};

/// Sphere sizes #S_k of a layered graph; #S_0 must be 1.
struct SphereSizes {
  std::function<std::size_t(std::size_t)> size;
  std::string description;

  static SphereSizes constant_one() {
    return {[](std::size_t) { return std::size_t{1}; }, "1"};
  }
  /// #S_k = base^k
  static SphereSizes power(std::size_t base) {
    if (base < 1) throw PreconditionFailed("sphere size base must be >= 1");
    return {[base](std::size_t k) {
              std::size_t s = 1;
              for (std::size_t i = 0; i < k; ++i) s *= base;
              return s;
            },
            std::to_string(base) + "^k"};
  }
  std::size_t operator()(std::size_t k) const { return size(k); }
};

/// Weakly spherically symmetric profile: outward weight b_plus(k) per
/// vertex of S_k, inward weight b_minus(k) per vertex of S_k (k >= 1).
/// When b_minus is absent it is derived from #S_k b+(k) = #S_{k+1} b-(k+1).
template <OrderedField F>
struct SphericalProfile {
  WeightRule<F> b_plus;
  std::optional<WeightRule<F>> b_minus;
  SphereSizes sizes = SphereSizes::constant_one();

  F plus(std::size_t k) const { return b_plus(k); }
  F minus(std::size_t k) const {
    if (k == 0) return F(0);
    if (b_minus) return (*b_minus)(k);
    return b_plus(k - 1) * F(static_cast<long>(sizes(k - 1))) / F(static_cast<long>(sizes(k)));
  }
  /// b(dB_{k+1}(o)) = #S_k b+(k)
  F boundary(std::size_t k) const { return F(static_cast<long>(sizes(k))) * b_plus(k); }

  /// Throws PreconditionFailed when #S_k b+(k) != #S_{k+1} b-(k+1) for some k < levels.
  void check_compatible(std::size_t levels) const {
    if (sizes(0) != 1) throw PreconditionFailed("sphere S_0 must contain exactly the root");
    for (std::size_t k = 0; k < levels; ++k) {
      if (sizes(k + 1) == 0) throw PreconditionFailed("empty sphere S_" + std::to_string(k + 1));
      const F lhs = F(static_cast<long>(sizes(k))) * b_plus(k);
      const F rhs = F(static_cast<long>(sizes(k + 1))) * minus(k + 1);
      if (!FieldOps<F>::approx_equal(lhs, rhs)) {
        throw PreconditionFailed("incompatible spherical profile at k=" + std::to_string(k) + ": #S_k b+(k) = " +
                                 FieldOps<F>::format(lhs) + " but #S_{k+1} b-(k+1) = " + FieldOps<F>::format(rhs));
      }
    }
  }
};

}  // namespace nacap
