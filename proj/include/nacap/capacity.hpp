#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nacap/convergence.hpp"
#include "nacap/dirichlet.hpp"
#include "nacap/errors.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/graph.hpp"
#include "nacap/levi_civita.hpp"
#include "nacap/rational_function.hpp"
#include "nacap/weight_rules.hpp"

namespace nacap {

/// cap_n(a) = cap_{B_n(a)}(a) for n = 1..N.
template <class F>
struct CapacitySequence {
  Vertex root = 0;
  std::size_t horizon = 0;
  /// values[n-1] = cap_n(a)
  std::vector<F> values;
  /// valuation(cap_n - cap_{n+1}), n = 1..N-1; nullopt is an exact zero.
  std::vector<ExtRational> valuations;

  const F& at(std::size_t n) const { return values.at(n - 1); }
};

template <OrderedField F>
CapacitySequence<F> capacity_sequence(const WeightedGraph<F>& g, Vertex a, std::size_t N) {
  if (N < 1) throw PreconditionFailed("capacity horizon must be at least 1");
  const WeightedGraph<F> h = covering(g, a, N);
  CapacitySequence<F> seq;
  seq.root = a;
  seq.horizon = N;
  for (std::size_t n = 1; n <= N; ++n) {
    const F c = effective_capacity(h, ball(h, a, n), a);
    if (FieldOps<F>::sign(c) <= 0) throw Error("capacity cap_" + std::to_string(n) + " is not positive");
    if (!seq.values.empty() && !FieldOps<F>::le_within_guarantee(c, seq.values.back())) {
      throw Error("capacity increased from n=" + std::to_string(n - 1) + " to n=" + std::to_string(n));
    }
    seq.values.push_back(c);
  }
  seq.valuations = difference_trend(seq.values).valuations;
  return seq;
}

// ---------------------------------------------------------------------------
// Verdicts and certificates

enum class CapacityKind { null, positive, divergent, inconclusive };

inline const char* to_string(CapacityKind k) {
  switch (k) {
    case CapacityKind::null: return "null";
    case CapacityKind::positive: return "positive";
    case CapacityKind::divergent: return "divergent";
    case CapacityKind::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Closed-form classification of a weakly spherically symmetric profile.
struct ExactSphericalCertificate {
  /// "null-subsequence", "positive-series" or "divergent-bounds".
  std::string formula;
  std::string rule;
  ValuationTrend trend = ValuationTrend::bounded;
  /// Levels k with record valuations of b+(k) inside the horizon (null case).
  std::vector<std::size_t> subsequence;
  /// Divergent case: c <= b+(k) for all k and b+(k) <= C infinitely often.
  std::optional<LCElement> lower;
  std::optional<LCElement> upper;
  /// Positive case: number of series terms summed before the tail bound.
  std::size_t terms = 0;
};

struct NashWilliamsCertificate {
  /// Radii n_k with strictly increasing valuation of b(dB_{n_k}(a)).
  std::vector<std::size_t> subsequence;
  /// valuation(b(dB_{n_k}(a))) along the subsequence (condition ii).
  std::vector<ExtRational> boundary_valuations;
  /// Least boundary edge valuation along the subsequence (condition iii).
  std::vector<ExtRational> max_edge_valuations;
  bool condition_ii = false;
  bool condition_iii = false;
  /// True when the weights come from a rule whose valuation tends to
  /// +infinity, so the finite subsequence extends indefinitely.
  bool symbolic = false;
};

/// b(x, y) >= tau on every edge.
struct BoundedBelowCertificate {
  LCElement tau;
  std::string rule;
};

struct HorizonEvidence {
  std::size_t horizon = 0;
  std::vector<ExtRational> difference_valuations;
  bool differences_increasing = false;
};

using Certificate =
    std::variant<ExactSphericalCertificate, NashWilliamsCertificate, BoundedBelowCertificate, HorizonEvidence>;

struct CapacityVerdict {
  CapacityKind kind = CapacityKind::inconclusive;
  /// Present exactly when kind is positive.
  std::optional<LCElement> limit;
  /// First entry justifies `kind`; further entries are independent facts.
  std::vector<Certificate> certificates;
  /// Set when a certificate rules out null capacity.
  bool null_excluded = false;
};

// ---------------------------------------------------------------------------
// Nash-Williams test

/// Searches radii 1..N for a subsequence along which b(dB_n(a)) and the
/// largest boundary edge tend to zero: the record-high subsequence of the
/// boundary valuations must have at least two entries and rise by at least
/// `threshold` (an empty boundary counts as +infinity).
template <OrderedField F>
std::optional<NashWilliamsCertificate> nash_williams(const WeightedGraph<F>& g, Vertex a, std::size_t N,
                                                     const Rational& threshold = 4) {
  if (N < 1) return std::nullopt;
  const WeightedGraph<F> h = covering(g, a, N);
  std::vector<ExtRational> sums;
  std::vector<ExtRational> edges;
  for (std::size_t n = 1; n <= N; ++n) {
    const auto B = ball(h, a, n);
    const F s = boundary_weight(h, B);
    sums.push_back(FieldOps<F>::is_exact_zero(s) ? ExtRational{} : FieldOps<F>::valuation(s));
    edges.push_back(max_boundary_edge_valuation(h, B));
  }
  auto records = [](const std::vector<ExtRational>& v) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (idx.empty() || ext_less(v[idx.back()], v[i])) idx.push_back(i);
    }
    return idx;
  };
  auto fires = [&](const std::vector<ExtRational>& v, const std::vector<std::size_t>& idx) {
    if (idx.size() < 2) return false;
    const ExtRational& first = v[idx.front()];
    const ExtRational& last = v[idx.back()];
    if (!last) return true;
    return first && *last - *first >= threshold;
  };
  const auto rec_ii = records(sums);
  const auto rec_iii = records(edges);
  const bool ii = fires(sums, rec_ii);
  const bool iii = fires(edges, rec_iii);
  if (!ii && !iii) return std::nullopt;

  NashWilliamsCertificate cert;
  cert.condition_ii = ii;
  cert.condition_iii = iii;
  for (std::size_t i : ii ? rec_ii : rec_iii) {
    cert.subsequence.push_back(i + 1);
    cert.boundary_valuations.push_back(sums[i]);
    cert.max_edge_valuations.push_back(edges[i]);
  }
  if (const auto* p = h.profile()) cert.symbolic = p->b_plus.trend() == ValuationTrend::to_plus_infinity;
  return cert;
}

/// Recomputes the boundary valuations at the certificate's radii.
template <OrderedField F>
bool verify_nash_williams(const WeightedGraph<F>& g, Vertex a, const NashWilliamsCertificate& cert) {
  if (cert.subsequence.size() < 2) return false;
  ExtRational prev;
  bool first = true;
  for (std::size_t i = 0; i < cert.subsequence.size(); ++i) {
    const auto B = ball(g, a, cert.subsequence[i]);
    const F s = boundary_weight(g, B);
    const ExtRational v = FieldOps<F>::is_exact_zero(s) ? ExtRational{} : FieldOps<F>::valuation(s);
    const ExtRational e = max_boundary_edge_valuation(g, B);
    if (v != cert.boundary_valuations[i] || e != cert.max_edge_valuations[i]) return false;
    const ExtRational& tracked = cert.condition_ii ? v : e;
    if (!first && !ext_less(prev, tracked)) return false;
    prev = tracked;
    first = false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spherical classification

namespace detail {

inline WeightRule<LCElement> to_lc_rule(const WeightRule<LCElement>& r) { return r; }
inline WeightRule<LCElement> to_lc_rule(const WeightRule<RFElement>& r) {
  return r.map<LCElement>([](const RFElement& x) { return x.embed(); });
}
inline WeightRule<LCElement> to_lc_rule(const WeightRule<Rational>& r) {
  return r.map<LCElement>([](const Rational& x) { return LCElement(x); });
}

template <OrderedField F>
SphericalProfile<LCElement> to_lc_profile(const SphericalProfile<F>& p) {
  SphericalProfile<LCElement> out{to_lc_rule(p.b_plus), std::nullopt, p.sizes};
  if (p.b_minus) out.b_minus = to_lc_rule(*p.b_minus);
  return out;
}

/// Sum over k of 1 / (#S_k b+(k)) for a rule whose valuation tends to
/// -infinity: terms are added until the next one lies a full window beyond
/// the partial sum, the rest is carried as a guarantee bound.
inline std::pair<LCElement, std::size_t> boundary_series(const SphericalProfile<LCElement>& p) {
  const Rational window = current_precision().window;
  LCElement sum(0);
  Rational lead;
  bool have_lead = false;
  const std::size_t floor = p.b_plus.prefix_size();
  for (std::size_t k = 0; k < 100000; ++k) {
    const Rational vk = -p.b_plus.valuation(k);
    if (k >= floor && have_lead && vk >= lead + window) {
      // Past the prefix the tail valuations -v(j) are nondecreasing.
      return {sum + LCElement::zero_like(vk), k};
    }
    if (!have_lead || vk < lead) {
      lead = vk;
      have_lead = true;
    }
    sum += LCElement(1) / p.boundary(k);
  }
  throw PrecisionExhausted("boundary series did not reach the precision window");
}

}  // namespace detail

/// Exact verdict for a weakly spherically symmetric profile from the
/// symbolic valuation trend of b+. Values in Q or Q(r) are classified
/// through their embedding into the Levi-Civita field. `horizon` bounds the
/// levels listed in certificates.
template <OrderedField F>
CapacityVerdict classify_spherical(const SphericalProfile<F>& profile, std::size_t horizon) {
  const SphericalProfile<LCElement> p = detail::to_lc_profile(profile);
  const WeightRule<LCElement>& rule = p.b_plus;
  ExactSphericalCertificate cert;
  cert.rule = rule.describe();
  cert.trend = rule.trend();
  CapacityVerdict v;
  switch (cert.trend) {
    case ValuationTrend::to_plus_infinity: {
      cert.formula = "null-subsequence";
      std::optional<Rational> best;
      for (std::size_t k = 0; k <= horizon; ++k) {
        const Rational vk = rule.valuation(k);
        if (!best || vk > *best) {
          best = vk;
          cert.subsequence.push_back(k);
        }
      }
      v.kind = CapacityKind::null;
      break;
    }
    case ValuationTrend::to_minus_infinity: {
      cert.formula = "positive-series";
      auto [series, terms] = detail::boundary_series(p);
      cert.terms = terms;
      v.kind = CapacityKind::positive;
      v.limit = LCElement(1) / series;
      v.null_excluded = true;
      break;
    }
    case ValuationTrend::bounded: {
      cert.formula = "divergent-bounds";
      const auto sup = rule.valuation_sup();
      const auto lo = rule.valuation_inf_often_lower();
      if (!sup || !lo) {
        v.kind = CapacityKind::inconclusive;
        return v;
      }
      cert.lower = LCElement::monomial(1, *sup + 1);
      cert.upper = LCElement::monomial(1, *lo - 1);
      v.kind = CapacityKind::divergent;
      v.null_excluded = true;
      break;
    }
  }
  v.certificates.insert(v.certificates.begin(), cert);
  return v;
}

/// Checks the divergent-bounds certificate on levels 0..horizon: c <= b+(k)
/// everywhere and b+(k) <= C on at least half of the levels.
template <OrderedField F>
bool verify_spherical_bounds(const SphericalProfile<F>& profile, const ExactSphericalCertificate& cert,
                             std::size_t horizon) {
  if (!cert.lower || !cert.upper) return false;
  const auto p = detail::to_lc_profile(profile);
  std::size_t below_upper = 0;
  for (std::size_t k = 0; k <= horizon; ++k) {
    const LCElement b = p.plus(k);
    if (!le_within_guarantee(*cert.lower, b)) return false;
    if (le_within_guarantee(b, *cert.upper)) ++below_upper;
  }
  return 2 * below_upper >= horizon + 1;
}

/// tau = eps^(s+1) where s bounds the valuations of all weights from above;
/// only rules with a finite valuation supremum qualify.
template <OrderedField F>
std::optional<BoundedBelowCertificate> bounded_below(const WeightedGraph<F>& g) {
  const SphericalProfile<F>* p = g.profile();
  if (!p) return std::nullopt;
  const auto rule = detail::to_lc_rule(p->b_plus);
  const auto sup = rule.valuation_sup();
  if (!sup) return std::nullopt;
  // Every edge of the layered realization carries b+(k) divided by an
  // integer fan-out, which leaves the valuation unchanged.
  return BoundedBelowCertificate{LCElement::monomial(1, *sup + 1), rule.describe()};
}

/// Checks b(x, y) >= tau on every materialized edge within `radius` of a.
template <OrderedField F>
bool verify_bounded_below(const WeightedGraph<F>& g, Vertex a, std::size_t radius,
                          const BoundedBelowCertificate& cert) {
  const WeightedGraph<F> h = covering(g, a, radius);
  for (Vertex x : ball(h, a, radius)) {
    for (const auto& n : h.neighbors(x)) {
      LCElement w;
      if constexpr (std::is_same_v<F, LCElement>) {
        w = n.weight;
      } else if constexpr (std::is_same_v<F, RFElement>) {
        w = n.weight.embed();
      } else {
        w = LCElement(n.weight);
      }
      if (!le_within_guarantee(cert.tau, w)) return false;
    }
  }
  return true;
}

/// Sound-or-inconclusive classification of the capacity type at root a.
/// Order of certificates: Nash-Williams (null), symbolic spherical
/// recognition, bounded-below weights (null excluded). Without a verdict the
/// capacity sequence to N is computed and its difference valuations are
/// reported as horizon evidence.
template <OrderedField F>
CapacityVerdict classify_generic(const WeightedGraph<F>& g, Vertex a, std::size_t N,
                                 const Rational& valuation_threshold = 4) {
  const auto bounded = bounded_below(g);
  CapacityVerdict v;
  if (auto nw = nash_williams(g, a, N, valuation_threshold)) {
    v.kind = CapacityKind::null;
    v.certificates.push_back(*nw);
  } else if (const auto* p = g.profile()) {
    v = classify_spherical(*p, N);
  }
  if (bounded) {
    if (v.kind == CapacityKind::null) throw Error("null certificate contradicts weights bounded below");
    v.certificates.push_back(*bounded);
    v.null_excluded = true;
  }
  if (v.kind == CapacityKind::inconclusive) {
    const CapacitySequence<F> seq = capacity_sequence(g, a, N);
    const DifferenceTrend trend{seq.valuations};
    v.certificates.push_back(HorizonEvidence{N, seq.valuations, trend.eventually_increasing_past(valuation_threshold)});
  }
  return v;
}

// ---------------------------------------------------------------------------
// Monotonicity and the real bridge

template <class F>
struct MonotoneRow {
  std::size_t n = 0;
  F cap;
  F cap_prime;
  bool holds = false;
};

/// Compares cap_n(a) on g and g' for n = 1..N. Requires the same vertex
/// structure and b <= b' on every edge of B_{N+1}(a).
template <OrderedField F>
std::vector<MonotoneRow<F>> monotone_compare(const WeightedGraph<F>& g, const WeightedGraph<F>& gp, Vertex a,
                                             std::size_t N) {
  const WeightedGraph<F> h = covering(g, a, N);
  const WeightedGraph<F> hp = covering(gp, a, N);
  for (Vertex x : ball(h, a, N)) {
    const auto& e = h.neighbors(x);
    const auto& ep = hp.neighbors(x);
    if (e.size() != ep.size()) throw PreconditionFailed("graphs differ at vertex " + std::to_string(x));
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i].to != ep[i].to) throw PreconditionFailed("graphs differ at vertex " + std::to_string(x));
      if (!FieldOps<F>::le_within_guarantee(e[i].weight, ep[i].weight)) {
        throw PreconditionFailed("b(" + std::to_string(x) + "," + std::to_string(e[i].to) + ") exceeds b'");
      }
    }
    if (!FieldOps<F>::approx_equal(h.measure(x), hp.measure(x))) {
      throw PreconditionFailed("measures differ at vertex " + std::to_string(x));
    }
  }
  std::vector<MonotoneRow<F>> rows;
  for (std::size_t n = 1; n <= N; ++n) {
    const auto B = ball(h, a, n);
    MonotoneRow<F> row{n, effective_capacity(h, B, a), effective_capacity(hp, B, a), false};
    row.holds = FieldOps<F>::le_within_guarantee(row.cap, row.cap_prime);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct RealSweepRow {
  Rational r;
  Rational capacity;
  Rational scaled;  // r^(-n) * capacity
};

/// Classical capacity cap_{B_N(a)}(a) of the real graph b_r for each r,
/// computed exactly over Q, and r^(-n_power) times it.
inline std::vector<RealSweepRow> real_sweep(const WeightedGraph<RFElement>& g, Vertex a, long n_power,
                                            const std::vector<Rational>& r_values, std::size_t N) {
  std::vector<RealSweepRow> rows;
  for (const Rational& r : r_values) {
    if (r <= 0) throw PreconditionFailed("r must be positive");
    const WeightedGraph<Rational> gr =
        g.map_field<Rational>(std::function<Rational(const RFElement&)>([r](const RFElement& x) { return x.evaluate(r); }));
    const Rational c = effective_capacity(gr, ball(gr, a, N), a);
    const Rational scale = n_power >= 0 ? pow(r, static_cast<unsigned long>(n_power))
                                         : Rational(1) / pow(r, static_cast<unsigned long>(-n_power));
    rows.push_back({r, c, c / scale});
  }
  return rows;
}

}  // namespace nacap
