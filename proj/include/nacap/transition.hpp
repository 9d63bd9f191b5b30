#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nacap/dirichlet.hpp"
#include "nacap/errors.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/graph.hpp"
#include "nacap/precision.hpp"

namespace nacap {

/// Transition operator P = I - Delta on a graph with m(x) = b(x), so
/// p(x, y) = b(x, y) / b(x). An optional finite set K confines all paths to K.
template <OrderedField F>
class TransitionContext {
 public:
  explicit TransitionContext(const WeightedGraph<F>& g, std::optional<std::vector<Vertex>> K = std::nullopt)
      : graph_(g.with_degree_measure()) {
    if (K) {
      if (K->empty()) throw PreconditionFailed("restriction set is empty");
      restriction_ = std::set<Vertex>(K->begin(), K->end());
      graph_ = covering_set(graph_, *K);
      for (Vertex x : *K) {
        if (x >= graph_.vertex_count()) throw PreconditionFailed("restriction vertex out of range");
      }
    }
  }

  const WeightedGraph<F>& graph() const { return graph_; }
  const std::optional<std::set<Vertex>>& restriction() const { return restriction_; }
  bool allowed(Vertex v) const { return !restriction_ || restriction_->count(v) > 0; }

  /// Same graph with paths confined to K.
  TransitionContext restricted(const std::vector<Vertex>& K) const {
    TransitionContext c = *this;
    c.restriction_ = std::set<Vertex>(K.begin(), K.end());
    c.graph_ = covering_set(graph_, K);
    return c;
  }

  /// Snapshot in which every vertex within distance < depth of each listed
  /// vertex is complete; the context keeps the larger snapshot.
  void ensure(const std::vector<Vertex>& centers, std::size_t depth) const {
    if (restriction_) return;  // covering_set already made K complete
    for (Vertex c : centers) graph_ = covering(graph_, c, depth);
  }

  /// Row x of P as (y, p(x, y)), cached; grows the snapshot when x is not
  /// complete. Unrestricted; callers filter by K.
  const std::vector<std::pair<Vertex, F>>& row(Vertex x) const {
    auto it = rows_.find(x);
    if (it != rows_.end()) return it->second;
    if (x >= graph_.vertex_count() || !graph_.complete(x)) graph_ = covering_set(graph_, {x});
    const F deg = graph_.degree(x);
    std::vector<std::pair<Vertex, F>> r;
    for (const auto& n : graph_.neighbors(x)) r.emplace_back(n.to, n.weight / deg);
    return rows_.emplace(x, std::move(r)).first->second;
  }

  F p(Vertex x, Vertex y) const {
    for (const auto& [z, v] : row(x)) {
      if (z == y) return v;
    }
    return F(0);
  }

  /// sum_y p(x, y); 1 at every complete vertex (up to the guarantee in LC).
  F row_sum(Vertex x) const {
    F s(0);
    for (const auto& [z, v] : row(x)) s += v;
    return s;
  }

 private:
  mutable WeightedGraph<F> graph_;
  std::optional<std::set<Vertex>> restriction_;
  mutable std::map<Vertex, std::vector<std::pair<Vertex, F>>> rows_;
};

namespace detail {

/// Distances from y over the context graph, up to depth.
template <OrderedField F>
std::map<Vertex, std::size_t> distances_to(const TransitionContext<F>& ctx, Vertex y, std::size_t depth) {
  std::map<Vertex, std::size_t> d{{y, 0}};
  std::vector<Vertex> frontier{y};
  for (std::size_t k = 1; k <= depth && !frontier.empty(); ++k) {
    std::vector<Vertex> next;
    for (Vertex x : frontier) {
      if (!ctx.graph().complete(x)) continue;
      for (const auto& n : ctx.graph().neighbors(x)) {
        if (ctx.allowed(n.to) && d.emplace(n.to, k).second) next.push_back(n.to);
      }
    }
    frontier = std::move(next);
  }
  return d;
}

/// f_n(y) for n = 0..N where f_0 = 1_x and f_{k+1}(z) = sum_w f_k(w) p(w, z),
/// i.e. P^n(x, y), or the max-product variant when `max_product` is set.
/// Vertices too far from y to reach it in the remaining steps are dropped.
template <OrderedField F>
std::vector<F> forward_series(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t N, bool max_product) {
  if (!ctx.allowed(x) || !ctx.allowed(y)) throw PreconditionFailed("x and y must lie in the restriction set");
  ctx.ensure({x, y}, N + 1);
  const auto dist = distances_to(ctx, y, N);
  if (!dist.count(x)) return std::vector<F>(N + 1, F(0));
  std::vector<F> out;
  VertexFunction<F> f{{x, F(1)}};
  out.push_back(x == y ? F(1) : F(0));
  for (std::size_t k = 1; k <= N; ++k) {
    const std::size_t remaining = N - k;
    VertexFunction<F> next;
    for (const auto& [w, val] : f) {
      for (const auto& [z, pz] : ctx.row(w)) {
        if (!ctx.allowed(z)) continue;
        const auto it = dist.find(z);
        if (it == dist.end() || it->second > remaining) continue;
        const F t = val * pz;
        auto slot = next.find(z);
        if (slot == next.end()) {
          next.emplace(z, t);
        } else if (max_product) {
          keep_max(slot->second, t);
        } else {
          slot->second += t;
        }
      }
    }
    f = std::move(next);
    out.push_back(value_at(f, y));
  }
  return out;
}

}  // namespace detail

/// P^n(x, y) for n = 0..N by exact dynamic programming over paths.
template <OrderedField F>
std::vector<F> pn_series(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t N) {
  return detail::forward_series(ctx, x, y, N, false);
}

template <OrderedField F>
F pn_element(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t n) {
  return pn_series(ctx, x, y, n).back();
}

/// Pi^n(x, y) = max over paths of length n of the product of p along the path.
template <OrderedField F>
F pi_element(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t n) {
  return detail::forward_series(ctx, x, y, n, true).back();
}

template <OrderedField F>
std::vector<F> pi_series(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t N) {
  return detail::forward_series(ctx, x, y, N, true);
}

/// P_K^n(x, y): paths confined to K, p taken from the full graph.
template <OrderedField F>
F pn_restricted(const TransitionContext<F>& ctx, const std::vector<Vertex>& K, Vertex x, Vertex y, std::size_t n) {
  return pn_element(ctx.restricted(K), x, y, n);
}

/// (P^n 1_y)(z) for n = 0..N on the vertices where the result is needed to
/// evaluate at x and its neighbors, propagating columns backwards from y.
template <OrderedField F>
std::vector<VertexFunction<F>> pn_columns(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t N) {
  ctx.ensure({x}, N + 2);
  const auto near = distances(ctx.graph(), x, N + 1);
  std::vector<VertexFunction<F>> cols;
  VertexFunction<F> c;
  if (near.count(y) && ctx.allowed(y)) c[y] = F(1);
  cols.push_back(c);
  for (std::size_t n = 1; n <= N; ++n) {
    VertexFunction<F> next;
    const std::size_t reach = N + 1 - n;
    for (const auto& [z, d] : near) {
      if (d > reach || !ctx.allowed(z)) continue;
      F s(0);
      bool any = false;
      for (const auto& [w, pw] : ctx.row(z)) {
        const auto it = cols.back().find(w);
        if (it == cols.back().end() || !ctx.allowed(w)) continue;
        s += pw * it->second;
        any = true;
      }
      if (any) next[z] = s;
    }
    cols.push_back(std::move(next));
  }
  return cols;
}

// ---------------------------------------------------------------------------
// Decay and non-decay certificates

/// Lower bound valuation(P^n(x, y)) >= slope * (n - offset) for all n and
/// all x, y (in K when restricted); slope > 0 certifies P^n -> 0.
struct DecayCertificate {
  /// "min-mean-cycle" (finite K) or "path-round-trip" (rule-defined path).
  std::string method;
  /// +infinity (nullopt) when no closed walk exists.
  ExtRational slope;
  /// n - offset counts the steps spent on closed walks.
  Rational offset;
  /// Round-trip halving for paths: bound is slope * (n - d(x, y)) / 2.
  bool per_round_trip = false;

  /// Certified lower bound on valuation(P^n(x, y)).
  ExtRational bound(std::size_t n, std::size_t dxy = 0) const {
    if (!slope) return std::nullopt;
    Rational steps = Rational(static_cast<unsigned long>(n));
    if (per_round_trip) {
      steps = (steps - static_cast<unsigned long>(dxy)) / 2;
    } else {
      steps -= offset;
    }
    if (steps < 0) steps = 0;
    return *slope * steps;
  }
};

/// P^k(x0, x0) >= c > 0 with c rational and k >= 2, so P^(jk)(x0, x0) >= c^j
/// and P^n does not tend to zero.
template <class F>
struct NonDecayCertificate {
  Vertex x0 = 0;
  std::size_t k = 0;
  Rational c;
  F value;
};

/// Minimum mean cycle (Karp) of the valuations valuation(p(u, v)) over the
/// directed edges inside K. Every walk of length n in K is a simple path plus
/// closed walks of total length >= n - |K| + 1, and p <= 1 has valuation >= 0.
template <OrderedField F>
DecayCertificate min_mean_cycle_certificate(const TransitionContext<F>& ctx) {
  if (!ctx.restriction()) throw PreconditionFailed("min-mean-cycle bound needs a finite restriction set");
  const std::vector<Vertex> K(ctx.restriction()->begin(), ctx.restriction()->end());
  const std::size_t n = K.size();
  std::map<Vertex, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[K[i]] = i;
  struct Arc {
    std::size_t u, v;
    Rational w;
  };
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [z, pz] : ctx.row(K[i])) {
      const auto it = index.find(z);
      if (it == index.end()) continue;
      const ExtRational v = FieldOps<F>::valuation(pz);
      if (!v) throw PrecisionExhausted("transition probability p(" + std::to_string(K[i]) + "," + std::to_string(z) +
                                       ") has no certified valuation");
      arcs.push_back({i, it->second, *v});
    }
  }
  DecayCertificate cert{"min-mean-cycle", std::nullopt, Rational(static_cast<unsigned long>(n)) - 1, false};
  if (arcs.empty()) return cert;
  // D[k][v]: least weight of a walk with exactly k arcs ending in v, from a
  // virtual source joined to every vertex at weight 0.
  std::vector<std::vector<ExtRational>> D(n + 1, std::vector<ExtRational>(n));
  for (std::size_t v = 0; v < n; ++v) D[0][v] = Rational(0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (const auto& a : arcs) {
      if (!D[k - 1][a.u]) continue;
      const Rational c = *D[k - 1][a.u] + a.w;
      if (!D[k][a.v] || c < *D[k][a.v]) D[k][a.v] = c;
    }
  }
  std::optional<Rational> mu;
  for (std::size_t v = 0; v < n; ++v) {
    if (!D[n][v]) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (!D[k][v]) continue;
      const Rational m = (*D[n][v] - *D[k][v]) / static_cast<unsigned long>(n - k);
      if (!worst || m > *worst) worst = m;
    }
    if (worst && (!mu || *worst < *mu)) mu = worst;
  }
  if (mu) cert.slope = *mu;
  return cert;
}

/// Decay bound on a rule-defined path graph (vertices 0, 1, 2, ... with
/// b(k, k+1) = w(k)). A walk of length n from x to y crosses each edge
/// back and forth at least (n - d(x, y)) / 2 times in total, so the least
/// round-trip valuation valuation(p(k, k+1) p(k+1, k)) over all edges
/// bounds its decay. Returns nullopt when that infimum is not positive or
/// the rule has no computable infimum.
template <OrderedField F>
std::optional<DecayCertificate> path_round_trip_certificate(const TransitionContext<F>& ctx) {
  const SphericalProfile<F>* p = ctx.graph().profile();
  if (!p || ctx.restriction() || p->b_minus || p->sizes.description != "1") return std::nullopt;
  const WeightRule<F>& rule = p->b_plus;
  using Tail = typename WeightRule<F>::Tail;
  // v(k) for the edge (k, k+1); round trip over edge k needs v(k-1), v(k), v(k+1).
  auto trip = [&rule](std::size_t k) -> Rational {
    const Rational vk = rule.valuation(k);
    const Rational left = k == 0 ? vk : std::min(rule.valuation(k - 1), vk);
    const Rational right = std::min(vk, rule.valuation(k + 1));
    return 2 * vk - left - right;
  };
  std::size_t explicit_upto = rule.prefix_size() + 2;
  switch (rule.tail_kind()) {
    case Tail::monomial:
      // For k past the prefix the trip is |alpha| (or 0 for constant tails).
      break;
    case Tail::cycle: explicit_upto += 2 * rule.cycle().size(); break;
    case Tail::half_power:
    case Tail::custom: return std::nullopt;
  }
  std::optional<Rational> inf;
  for (std::size_t k = 0; k <= explicit_upto; ++k) {
    const Rational t = trip(k);
    if (!inf || t < *inf) inf = t;
  }
  if (rule.tail_kind() == Tail::monomial) {
    const Rational a = rule.alpha() < 0 ? Rational(-rule.alpha()) : rule.alpha();
    if (a < *inf) inf = a;
  }
  if (!inf || *inf <= 0) return std::nullopt;
  return DecayCertificate{"path-round-trip", *inf, 0, true};
}

/// Looks for k in [2, k_max] with P^k(x0, x0) of valuation 0; then c is half
/// its leading coefficient.
template <OrderedField F>
std::optional<NonDecayCertificate<F>> non_decay_certificate(const TransitionContext<F>& ctx, Vertex x0,
                                                            std::size_t k_max = 8) {
  const auto series = pn_series(ctx, x0, x0, k_max);
  for (std::size_t k = 2; k <= k_max; ++k) {
    const F& v = series[k];
    if (FieldOps<F>::is_exact_zero(v) || !certified_positive(v)) continue;
    const ExtRational val = FieldOps<F>::valuation(v);
    if (!val || *val != 0) continue;
    Rational lead;
    if constexpr (std::is_same_v<F, LCElement>) {
      lead = v.coefficient_at(0);
    } else if constexpr (std::is_same_v<F, RFElement>) {
      lead = v.embed().coefficient_at(0);
    } else {
      lead = v;
    }
    const Rational c = lead / 2;
    if (!FieldOps<F>::le_within_guarantee(FieldOps<F>::from_rational(c), v)) continue;
    return NonDecayCertificate<F>{x0, k, c, v};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Neumann series

template <class F>
struct NeumannResult {
  F sum;
  /// P^n(x, y), n = 0..N
  std::vector<F> terms;
  /// valuation(P^n(x, y)); nullopt for an exact zero.
  std::vector<ExtRational> valuations;
  std::optional<DecayCertificate> decay;
  std::optional<NonDecayCertificate<F>> non_decay;
  bool convergent() const { return decay && (!decay->slope || *decay->slope > 0); }
};

/// sum_{n=0}^N P^n(x, y) with its term valuations and any certificate that
/// decides whether the terms tend to zero.
template <OrderedField F>
NeumannResult<F> neumann_partial(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t N) {
  NeumannResult<F> r;
  r.terms = pn_series(ctx, x, y, N);
  r.sum = F(0);
  for (const auto& t : r.terms) {
    r.sum += t;
    r.valuations.push_back(FieldOps<F>::is_exact_zero(t) ? ExtRational{} : FieldOps<F>::valuation(t));
  }
  if (ctx.restriction()) {
    auto c = min_mean_cycle_certificate(ctx);
    if (!c.slope || *c.slope > 0) r.decay = c;
  } else if (auto c = path_round_trip_certificate(ctx); c && (!c->slope || *c->slope > 0)) {
    r.decay = c;
  }
  if (!r.decay) r.non_decay = non_decay_certificate(ctx, x, std::min<std::size_t>(std::max<std::size_t>(N, 2), 8));
  return r;
}

struct NeumannIdentity {
  bool holds = false;
  std::string lhs;
  std::string rhs;
};

/// (I - P) sum_{n<=N} P^n 1_y at x, computed from backward columns, against
/// 1_{x=y} - P^(N+1)(x, y) from the forward recursion.
template <OrderedField F>
NeumannIdentity neumann_identity_check(const TransitionContext<F>& ctx, Vertex x, Vertex y, std::size_t N) {
  const auto cols = pn_columns(ctx, x, y, N);
  auto S = [&](Vertex z) {
    F s(0);
    for (const auto& c : cols) s += value_at(c, z);
    return s;
  };
  F lhs = S(x);
  for (const auto& [z, pz] : ctx.row(x)) {
    if (ctx.allowed(z)) lhs -= pz * S(z);
  }
  const F rhs = F(x == y ? 1 : 0) - pn_element(ctx, x, y, N + 1);
  return {FieldOps<F>::approx_equal(lhs, rhs), FieldOps<F>::format(lhs), FieldOps<F>::format(rhs)};
}

template <class F>
struct NeumannInverseCheck {
  bool agrees = false;
  std::size_t terms = 0;
  DecayCertificate certificate;
  VertexFunction<F> series;
  VertexFunction<F> direct;
};

/// Compares sum_n P_K^n phi, with its certified tail bound, against the
/// Dirichlet solver's Delta_K^{-1} phi on K. Refuses when no decay
/// certificate exists for P_K.
template <OrderedField F>
NeumannInverseCheck<F> neumann_inverse_check(const TransitionContext<F>& ctx, const std::vector<Vertex>& K,
                                             const VertexFunction<F>& phi, std::size_t max_terms = 20000) {
  const TransitionContext<F> cK = ctx.restricted(K);
  NeumannInverseCheck<F> out;
  out.certificate = min_mean_cycle_certificate(cK);
  if (out.certificate.slope && *out.certificate.slope <= 0) {
    throw PreconditionFailed("restricted transition powers have no decay certificate");
  }
  for (const auto& [x, v] : phi) {
    if (!cK.allowed(x) && !FieldOps<F>::is_exact_zero(v)) throw PreconditionFailed("phi is not supported in K");
  }
  out.direct = dirichlet_inverse_apply(cK.graph(), K, phi);

  // Tail valuation target: a full window below every entry of the answer.
  ExtRational lowest_answer;
  for (const auto& [x, v] : out.direct) {
    if (!FieldOps<F>::is_exact_zero(v)) lowest_answer = ext_min(lowest_answer, FieldOps<F>::valuation(v));
  }
  ExtRational lowest_phi;
  for (const auto& [x, v] : phi) {
    if (!FieldOps<F>::is_exact_zero(v)) lowest_phi = ext_min(lowest_phi, FieldOps<F>::valuation(v));
  }
  std::size_t N = 0;
  if (lowest_phi && lowest_answer && out.certificate.slope) {
    const Rational target = *lowest_answer + current_precision().window - *lowest_phi;
    // need slope * (N + 1 - offset) >= target
    const Rational need = target / *out.certificate.slope + out.certificate.offset - 1;
    if (need > 0) {
      const mpz_class c = ceil(need);
      if (c > static_cast<unsigned long>(max_terms)) {
        throw PrecisionExhausted("Neumann series needs more than " + std::to_string(max_terms) + " terms");
      }
      N = c.get_ui();
    }
  }
  out.terms = N;
  const ExtRational tail = ext_add(out.certificate.bound(N + 1), lowest_phi ? *lowest_phi : Rational(0));

  // u_n = P_K^n phi, accumulated.
  VertexFunction<F> u;
  for (const auto& [x, v] : phi) {
    if (cK.allowed(x)) u[x] = v;
  }
  VertexFunction<F> sum = u;
  for (std::size_t n = 1; n <= N; ++n) {
    VertexFunction<F> next;
    for (Vertex x : K) {
      F s(0);
      bool any = false;
      for (const auto& [z, pz] : cK.row(x)) {
        const auto it = u.find(z);
        if (it == u.end() || !cK.allowed(z)) continue;
        s += pz * it->second;
        any = true;
      }
      if (any) next[x] = s;
    }
    u = std::move(next);
    for (const auto& [x, v] : u) sum[x] = value_at(sum, x) + v;
  }
  out.agrees = true;
  for (Vertex x : K) {
    F s = FieldOps<F>::with_guarantee(value_at(sum, x), tail);
    out.series[x] = s;
    if (!FieldOps<F>::approx_equal(s, value_at(out.direct, x))) out.agrees = false;
  }
  return out;
}

}  // namespace nacap
