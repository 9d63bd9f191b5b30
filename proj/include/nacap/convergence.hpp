#pragma once

#include <cstddef>
#include <vector>

#include "nacap/field_traits.hpp"
#include "nacap/rational.hpp"

namespace nacap {

/// Valuations of successive differences of a finite sequence, the finite
/// stand-in for convergence in the order topology: a sequence in a Cauchy
/// complete non-Archimedean field converges iff a_{n+1} - a_n -> 0, and in
/// the Levi-Civita field x -> 0 iff valuation(x) -> +infinity.
struct DifferenceTrend {
  /// valuation(a_{n+1} - a_n); nullopt is an exact zero difference.
  std::vector<ExtRational> valuations;

  /// True when, from some index on, the difference valuations increase
  /// strictly (exact zeros count as +infinity) and the last one is at least
  /// `threshold`. Reports evidence only; no finite prefix proves a limit.
  bool eventually_increasing_past(const Rational& threshold) const {
    if (valuations.empty()) return false;
    const ExtRational& last = valuations.back();
    if (last && *last < threshold) return false;
    // Walk back while strictly increasing; need at least two increasing steps
    // unless the tail is an exact zero.
    std::size_t run = 1;
    for (std::size_t i = valuations.size() - 1; i > 0; --i) {
      const ExtRational& a = valuations[i - 1];
      const ExtRational& b = valuations[i];
      const bool increasing = !b ? static_cast<bool>(a) || !a : (a && *a < *b);
      if (!increasing) break;
      ++run;
    }
    return !last || run >= 3;
  }
};

template <OrderedField F>
DifferenceTrend difference_trend(const std::vector<F>& seq) {
  DifferenceTrend t;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const F d = seq[i + 1] - seq[i];
    if (FieldOps<F>::is_exact_zero(d)) {
      t.valuations.push_back(std::nullopt);
    } else {
      // A zero-like difference is below every certified exponent: report its
      // guarantee as the valuation lower bound.
      const ExtRational v = FieldOps<F>::valuation(d);
      t.valuations.push_back(v ? v : FieldOps<F>::guarantee(d));
    }
  }
  return t;
}

}  // namespace nacap
