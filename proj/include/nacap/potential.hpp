#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nacap/capacity.hpp"
#include "nacap/dirichlet.hpp"
#include "nacap/errors.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/graph.hpp"

namespace nacap {

namespace detail {

template <OrderedField F>
void require_defined(const VertexFunction<F>& u, Vertex x, const char* what) {
  if (!u.count(x)) throw PreconditionFailed(std::string(what) + " is not defined at vertex " + std::to_string(x));
}

/// Shortest path from x to y using only vertices of W (inclusive).
template <OrderedField F>
std::vector<Vertex> path_within(const WeightedGraph<F>& g, const std::set<Vertex>& W, Vertex x, Vertex y) {
  std::map<Vertex, Vertex> parent{{x, x}};
  std::deque<Vertex> q{x};
  while (!q.empty()) {
    const Vertex v = q.front();
    q.pop_front();
    if (v == y) break;
    for (const auto& n : g.neighbors(v)) {
      if (W.count(n.to) && parent.emplace(n.to, v).second) q.push_back(n.to);
    }
  }
  if (!parent.count(y)) throw PreconditionFailed("vertex set W is not connected");
  std::vector<Vertex> path{y};
  while (path.back() != x) path.push_back(parent.at(path.back()));
  return {path.rbegin(), path.rend()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Superharmonic functions

template <class F>
struct SuperharmonicCheck {
  bool holds = true;
  /// First vertex of W (in the given order) with Delta u < 0.
  std::optional<Vertex> witness;
  VertexFunction<F> laplacian;
};

/// Checks Delta u(x) >= 0 for x in W. u must be given on W and all
/// neighbors of W. Throws PrecisionExhausted when a sign is undecidable.
template <OrderedField F>
SuperharmonicCheck<F> is_superharmonic(const WeightedGraph<F>& g, const VertexFunction<F>& u,
                                       const std::vector<Vertex>& W) {
  const WeightedGraph<F> h = covering_set(g, W);
  SuperharmonicCheck<F> out;
  for (Vertex x : W) {
    detail::require_defined(u, x, "u");
    for (const auto& n : h.neighbors(x)) detail::require_defined(u, n.to, "u");
    const F lap = laplacian_apply(h, u, x);
    out.laplacian[x] = lap;
    if (out.holds && FieldOps<F>::sign(lap) < 0) {
      out.holds = false;
      out.witness = x;
    }
  }
  return out;
}

template <class F>
struct SuperharmonicConstruction {
  /// "1 - c^|x| tau" or "1 - |x| tau".
  std::string formula;
  Vertex root = 0;
  std::size_t horizon = 0;
  VertexFunction<F> values;
  /// Levels 0..horizon-1, where superharmonicity was verified.
  std::vector<Vertex> verified_on;
};

/// Builds u(x) = 1 - c^|x| tau (c > 1) or v(x) = 1 - |x| tau (c <= 1),
/// |x| = d(o, x), on B_{horizon+1}(o) after checking b-(x)/b+(x) <= c for
/// |x| < horizon and c^n < 1/tau for every n. The result is verified to be
/// positive and superharmonic on B_horizon(o).
template <OrderedField F>
SuperharmonicConstruction<F> construct_superharmonic(const WeightedGraph<F>& g, Vertex o, const F& c, const F& tau,
                                                     std::size_t horizon = 8) {
  if (horizon < 1) throw PreconditionFailed("horizon must be at least 1");
  if (FieldOps<F>::sign(c) <= 0) throw PreconditionFailed("c must be positive");
  if (FieldOps<F>::sign(tau) <= 0) throw PreconditionFailed("tau must be positive");
  const ExtRational vt = FieldOps<F>::valuation(tau);
  if (!vt || *vt <= 0) throw PreconditionFailed("tau must be infinitesimal");
  // c^n < 1/tau for all n: fails for infinitely large c, holds otherwise.
  const ExtRational vc = FieldOps<F>::valuation(c);
  if (vc && *vc < 0) {
    throw PreconditionFailed("c^n < 1/tau fails for large n: c = " + FieldOps<F>::format(c) + " is infinitely large");
  }

  const WeightedGraph<F> h = covering(g, o, horizon + 1);
  const auto dist = distances(h, o, horizon + 1);
  for (const auto& [x, d] : dist) {
    if (d >= horizon) continue;
    F minus(0), plus(0);
    for (const auto& n : h.neighbors(x)) {
      const std::size_t dn = dist.at(n.to);
      if (dn + 1 == d) minus += n.weight;
      if (dn == d + 1) plus += n.weight;
    }
    if (FieldOps<F>::is_exact_zero(minus)) continue;
    if (FieldOps<F>::is_exact_zero(plus) || FieldOps<F>::sign(c * plus - minus) < 0) {
      throw PreconditionFailed("b-(x)/b+(x) <= c fails at vertex " + std::to_string(x) + ": b- = " +
                               FieldOps<F>::format(minus) + ", b+ = " + FieldOps<F>::format(plus));
    }
  }

  SuperharmonicConstruction<F> out;
  out.root = o;
  out.horizon = horizon;
  const bool large = FieldOps<F>::sign(c - F(1)) > 0;
  out.formula = large ? "1 - c^|x| tau" : "1 - |x| tau";
  for (const auto& [x, d] : dist) {
    const F value = large ? F(1) - pow(c, d) * tau : F(1) - F(static_cast<long>(d)) * tau;
    if (FieldOps<F>::sign(value) <= 0) throw Error("constructed function is not positive at " + std::to_string(x));
    out.values[x] = value;
  }
  for (const auto& [x, d] : dist) {
    if (d < horizon) out.verified_on.push_back(x);
  }
  const auto check = is_superharmonic(h, out.values, out.verified_on);
  if (!check.holds) throw Error("constructed function is not superharmonic at " + std::to_string(*check.witness));
  return out;
}

// ---------------------------------------------------------------------------
// Harnack, ground state transform, energy-distance bound

/// C_W = max over ordered pairs (x, y) of prod_i b(x_i) / b(x_{i-1}, x_i)
/// along a breadth-first shortest path x = x_0 ~ ... ~ x_n = y inside W.
template <OrderedField F>
F harnack_constant(const WeightedGraph<F>& g, const std::vector<Vertex>& W) {
  if (W.empty()) throw PreconditionFailed("vertex set W is empty");
  const WeightedGraph<F> h = covering_set(g, W);
  const std::set<Vertex> in(W.begin(), W.end());
  F best(1);
  for (Vertex x : W) {
    for (Vertex y : W) {
      if (x == y) continue;
      const auto path = detail::path_within(h, in, x, y);
      F c(1);
      for (std::size_t i = 1; i < path.size(); ++i) c *= h.degree(path[i]) / h.weight(path[i - 1], path[i]);
      detail::keep_max(best, c);
    }
  }
  return best;
}

template <class F>
struct IdentityCheck {
  bool holds = false;
  F lhs;
  F rhs;
};

/// Q(phi) - <(Delta u / u) phi, phi> against Q_u(phi / u) with
/// b_u(x, y) = b(x, y) u(x) u(y). u must be positive on supp(phi) and its
/// neighbors.
template <OrderedField F>
IdentityCheck<F> ground_state_transform_check(const WeightedGraph<F>& g, const VertexFunction<F>& u,
                                              const VertexFunction<F>& phi) {
  std::vector<Vertex> support;
  for (const auto& [x, v] : phi) support.push_back(x);
  const WeightedGraph<F> h = covering_set(g, support);
  for (Vertex x : support) {
    detail::require_defined(u, x, "u");
    for (const auto& n : h.neighbors(x)) detail::require_defined(u, n.to, "u");
  }
  for (const auto& [x, v] : u) {
    if (FieldOps<F>::sign(v) <= 0) throw PreconditionFailed("u is not positive at vertex " + std::to_string(x));
  }

  F lhs = energy(h, phi);
  for (Vertex x : support) {
    const F px = phi.at(x);
    lhs -= laplacian_apply(h, u, x) / u.at(x) * px * px * h.measure(x);
  }

  // Q_u(psi), psi = phi / u, each edge counted once.
  F rhs(0);
  for (Vertex x : support) {
    const F psi_x = phi.at(x) / u.at(x);
    for (const auto& n : h.neighbors(x)) {
      const auto it = phi.find(n.to);
      const F bu = n.weight * u.at(x) * u.at(n.to);
      if (it == phi.end()) {
        rhs += bu * psi_x * psi_x;
      } else if (x < n.to) {
        const F d = psi_x - it->second / u.at(n.to);
        rhs += bu * d * d;
      }
    }
  }
  return {FieldOps<F>::approx_equal(lhs, rhs), lhs, rhs};
}

/// C_{x,y} = 2n / min_i b(x_{i-1}, x_i) along a shortest path of length n,
/// so that |phi(x) - phi(y)|^2 <= C_{x,y} Q(phi) for finitely supported phi.
template <OrderedField F>
F energy_distance_constant(const WeightedGraph<F>& g, Vertex x, Vertex y) {
  if (x == y) return F(0);
  WeightedGraph<F> h = g;
  for (std::size_t r = 1;; r *= 2) {
    h = covering(h, x, r);
    if (distances(h, x, r).count(y)) break;
    if (h.is_finite() && r > h.vertex_count()) throw PreconditionFailed("vertices are not connected");
  }
  std::set<Vertex> all;
  for (Vertex v = 0; v < h.vertex_count(); ++v) all.insert(v);
  const auto path = detail::path_within(h, all, x, y);
  F least = h.weight(path[0], path[1]);
  for (std::size_t i = 2; i < path.size(); ++i) {
    const F w = h.weight(path[i - 1], path[i]);
    if (FieldOps<F>::sign(w - least) < 0) least = w;
  }
  return F(static_cast<long>(2 * (path.size() - 1))) / least;
}

// ---------------------------------------------------------------------------
// Hardy weights

enum class HardyProvenance { point_mass, spherical_lower_bounds, user_supplied, ground_state };

inline const char* to_string(HardyProvenance p) {
  switch (p) {
    case HardyProvenance::point_mass: return "point_mass";
    case HardyProvenance::spherical_lower_bounds: return "spherical_lower_bounds";
    case HardyProvenance::user_supplied: return "user_supplied";
    case HardyProvenance::ground_state: return "ground_state";
  }
  return "?";
}

template <class F>
struct HardyWeight {
  /// omega on its support; absent vertices carry 0.
  VertexFunction<F> weight;
  HardyProvenance provenance = HardyProvenance::user_supplied;
  std::optional<Vertex> root;
};

/// m_x = tau * eps with tau from the bounded-below certificate: cap_n(x) >=
/// tau cap'_n(x) where cap'_n(x) is the capacity for weights 1_{b != 0}, a
/// positive rational, hence above eps.
template <OrderedField F>
VertexFunction<LCElement> capacity_lower_bounds(const WeightedGraph<F>& g, const std::vector<Vertex>& vertices) {
  const auto cert = bounded_below(g);
  if (!cert) throw PreconditionFailed("no bounded-below certificate for capacity lower bounds");
  const LCElement m = cert->tau * LCElement::epsilon();
  VertexFunction<LCElement> out;
  for (Vertex x : vertices) out[x] = m;
  return out;
}

/// Positive verdict: omega = cap(a) 1_a. Otherwise per-vertex lower bounds
/// m_x <= cap_n(x) give omega(x) = m_x 2^{-(i+1)} for the i-th vertex in id
/// order.
template <OrderedField F>
HardyWeight<F> hardy_construct(const CapacityVerdict& verdict, Vertex a,
                               const std::optional<VertexFunction<F>>& lower_bounds = std::nullopt) {
  if (verdict.kind == CapacityKind::null) throw PreconditionFailed("a graph of null capacity has no Hardy weight");
  HardyWeight<F> w;
  if (verdict.kind == CapacityKind::positive && verdict.limit) {
    if constexpr (std::is_same_v<F, LCElement>) {
      w.weight[a] = *verdict.limit;
      w.provenance = HardyProvenance::point_mass;
      w.root = a;
      return w;
    }
  }
  if (lower_bounds && !lower_bounds->empty()) {
    Rational c(1, 2);
    for (const auto& [x, m] : *lower_bounds) {
      if (FieldOps<F>::sign(m) <= 0) throw PreconditionFailed("lower bound at vertex " + std::to_string(x) + " is not positive");
      w.weight[x] = m * FieldOps<F>::from_rational(c);
      c /= 2;
    }
    w.provenance = HardyProvenance::spherical_lower_bounds;
    return w;
  }
  throw PreconditionFailed("no certificate for a Hardy weight: need a positive verdict or capacity lower bounds");
}

/// omega = m Delta u / u for u positive and superharmonic on W.
template <OrderedField F>
HardyWeight<F> ground_state_weight(const WeightedGraph<F>& g, const VertexFunction<F>& u, const std::vector<Vertex>& W) {
  const auto check = is_superharmonic(g, u, W);
  if (!check.holds) throw PreconditionFailed("u is not superharmonic at " + std::to_string(*check.witness));
  const WeightedGraph<F> h = covering_set(g, W);
  HardyWeight<F> w;
  w.provenance = HardyProvenance::ground_state;
  for (Vertex x : W) {
    if (FieldOps<F>::sign(u.at(x)) <= 0) throw PreconditionFailed("u is not positive at " + std::to_string(x));
    const F v = h.measure(x) * check.laplacian.at(x) / u.at(x);
    if (!FieldOps<F>::is_exact_zero(v)) w.weight[x] = v;
  }
  return w;
}

struct HardyReport {
  bool holds = true;
  std::optional<std::size_t> failing_sample;
};

/// Q(phi) >= sum phi^2 omega for every sample; with `squared`, also
/// Q(phi) >= (sum phi omega)^2, which needs sum omega <= 1.
template <OrderedField F>
HardyReport hardy_verify(const WeightedGraph<F>& g, const HardyWeight<F>& omega,
                         const std::vector<VertexFunction<F>>& samples, bool squared = false) {
  F total(0);
  bool nontrivial = false;
  for (const auto& [x, v] : omega.weight) {
    const int s = FieldOps<F>::sign(v);
    if (s < 0) throw PreconditionFailed("Hardy weight is negative at vertex " + std::to_string(x));
    nontrivial = nontrivial || s > 0;
    total += v;
  }
  if (!nontrivial) throw PreconditionFailed("Hardy weight is identically zero");
  if (squared && !FieldOps<F>::le_within_guarantee(total, F(1))) {
    throw PreconditionFailed("squared Hardy inequality needs sum of omega <= 1");
  }
  HardyReport r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& phi = samples[i];
    const F q = energy(g, phi);
    F lin(0), quad(0);
    for (const auto& [x, v] : phi) {
      const F w = value_at(omega.weight, x);
      quad += v * v * w;
      lin += v * w;
    }
    bool ok = FieldOps<F>::le_within_guarantee(quad, q);
    if (squared) ok = ok && FieldOps<F>::le_within_guarantee(lin * lin, q);
    if (!ok) {
      r.holds = false;
      r.failing_sample = i;
      return r;
    }
  }
  return r;
}

}  // namespace nacap
