#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nacap/errors.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/weight_rules.hpp"

namespace nacap {

using Vertex = std::size_t;

/// Finitely supported function; absent vertices carry 0.
template <class F>
using VertexFunction = std::map<Vertex, F>;

template <class F>
F value_at(const VertexFunction<F>& f, Vertex x) {
  const auto it = f.find(x);
  return it == f.end() ? F(0) : it->second;
}

template <class F>
struct Neighbor {
  Vertex to;
  F weight;
};

/// One materialization of a (possibly infinite) graph. A vertex is complete
/// when all of its neighbors are materialized, so sums over its neighborhood
/// are exact.
template <class F>
struct GraphData {
  std::vector<std::vector<Neighbor<F>>> adjacency;
  std::vector<F> measure;
  std::vector<bool> complete;
  /// Construction level (distance from the generator's root).
  std::vector<std::size_t> level;

  std::size_t size() const { return adjacency.size(); }
};

/// Locally finite weighted graph (V, b, m) over the field F.
///
/// Infinite graphs are a generator plus a materialized horizon. The
/// generator maps a radius R to a materialization in which every vertex of
/// level < R is complete; vertex ids are stable across radii. Snapshots are
/// immutable; growth returns a new snapshot.
template <OrderedField F>
class WeightedGraph {
 public:
  using Generator = std::function<GraphData<F>(std::size_t radius)>;

  /// Finite graph: every vertex complete.
  static WeightedGraph finite(GraphData<F> data) {
    data.complete.assign(data.size(), true);
    validate(data);
    WeightedGraph g;
    g.data_ = std::make_shared<const GraphData<F>>(std::move(data));
    return g;
  }

  static WeightedGraph generated(Generator generator, std::size_t radius,
                                 std::shared_ptr<const SphericalProfile<F>> profile = nullptr) {
    WeightedGraph g;
    g.generator_ = std::make_shared<const Generator>(std::move(generator));
    g.profile_ = std::move(profile);
    g.radius_ = std::max<std::size_t>(radius, 1);
    GraphData<F> data = (*g.generator_)(g.radius_);
    validate(data);
    g.data_ = std::make_shared<const GraphData<F>>(std::move(data));
    return g;
  }

  std::size_t vertex_count() const { return data_->size(); }
  const std::vector<Neighbor<F>>& neighbors(Vertex x) const { return data_->adjacency.at(x); }
  const F& measure(Vertex x) const { return data_->measure.at(x); }
  bool complete(Vertex x) const { return data_->complete.at(x); }
  std::size_t level(Vertex x) const { return data_->level.at(x); }
  bool has_generator() const { return static_cast<bool>(generator_); }
  std::size_t radius() const { return radius_; }
  bool is_finite() const { return !generator_; }
  const GraphData<F>& data() const { return *data_; }

  /// Symbolic profile when the graph was built from weight rules.
  const SphericalProfile<F>* profile() const { return profile_.get(); }

  /// b(x, y), zero when x and y are not adjacent.
  F weight(Vertex x, Vertex y) const {
    const auto& adj = neighbors(x);
    const auto it = std::lower_bound(adj.begin(), adj.end(), y,
                                     [](const Neighbor<F>& n, Vertex v) { return n.to < v; });
    if (it != adj.end() && it->to == y) return it->weight;
    return F(0);
  }

  /// b(x) = sum_y b(x, y); requires x complete.
  F degree(Vertex x) const {
    require_complete(x);
    F sum(0);
    for (const auto& n : neighbors(x)) sum += n.weight;
    return sum;
  }

  void require_complete(Vertex x) const {
    if (x >= vertex_count()) throw HorizonExhausted("vertex " + std::to_string(x) + " is not materialized");
    if (!complete(x)) {
      throw HorizonExhausted("neighborhood of vertex " + std::to_string(x) + " is beyond the horizon");
    }
  }

  /// Snapshot materialized to at least the given radius.
  WeightedGraph grown(std::size_t radius) const {
    if (!generator_) throw HorizonExhausted("finite graph has no generator to grow");
    if (radius <= radius_) return *this;
    WeightedGraph g = *this;
    g.radius_ = radius;
    GraphData<F> data = (*generator_)(radius);
    validate(data);
    g.data_ = std::make_shared<const GraphData<F>>(std::move(data));
    return g;
  }

  /// Same graph with measure m(x) = rule(x, graph) for every vertex, also for
  /// future growth. The rule must only read neighborhood data of x.
  WeightedGraph with_measure(std::function<F(Vertex, const GraphData<F>&)> rule) const {
    auto apply = [rule](GraphData<F> d) {
      for (Vertex x = 0; x < d.size(); ++x) d.measure[x] = rule(x, d);
      return d;
    };
    WeightedGraph g = *this;
    if (generator_) {
      auto base = generator_;
      g.generator_ = std::make_shared<const Generator>([base, apply](std::size_t r) { return apply((*base)(r)); });
    }
    GraphData<F> data = apply(*data_);
    validate(data);
    g.data_ = std::make_shared<const GraphData<F>>(std::move(data));
    return g;
  }

  /// m(x) = b(x). Incomplete boundary vertices get their partial degree,
  /// which is never read by computations that require completeness.
  WeightedGraph with_degree_measure() const {
    return with_measure([](Vertex x, const GraphData<F>& d) {
      F s(0);
      for (const auto& n : d.adjacency[x]) s += n.weight;
      return s;
    });
  }

  /// Measure multiplied by a constant factor.
  WeightedGraph with_measure_scaled(const F& factor) const {
    return with_measure([factor](Vertex x, const GraphData<F>& d) { return d.measure[x] * factor; });
  }

  /// Image of the graph under a field map (applied to weights and measures).
  template <OrderedField G>
  WeightedGraph<G> map_field(std::function<G(const F&)> fn) const {
    auto convert = [fn](const GraphData<F>& d) {
      GraphData<G> out;
      out.adjacency.resize(d.size());
      for (Vertex x = 0; x < d.size(); ++x) {
        for (const auto& n : d.adjacency[x]) out.adjacency[x].push_back({n.to, fn(n.weight)});
        out.measure.push_back(fn(d.measure[x]));
      }
      out.complete = d.complete;
      out.level = d.level;
      return out;
    };
    if (!generator_) return WeightedGraph<G>::finite(convert(*data_));
    auto base = generator_;
    return WeightedGraph<G>::generated([base, convert](std::size_t r) { return convert((*base)(r)); }, radius_);
  }

 private:
  template <OrderedField>
  friend class WeightedGraph;

  WeightedGraph() = default;

  static void validate(const GraphData<F>& d) {
    const std::size_t n = d.size();
    if (n == 0) throw PreconditionFailed("graph has no vertices");
    if (d.measure.size() != n || d.complete.size() != n || d.level.size() != n) {
      throw PreconditionFailed("inconsistent graph data sizes");
    }
    for (Vertex x = 0; x < n; ++x) {
      if (FieldOps<F>::sign(d.measure[x]) <= 0) {
        throw PreconditionFailed("measure at vertex " + std::to_string(x) + " is not positive");
      }
      const auto& adj = d.adjacency[x];
      for (std::size_t i = 0; i < adj.size(); ++i) {
        const auto& e = adj[i];
        if (e.to == x) throw PreconditionFailed("loop at vertex " + std::to_string(x));
        if (e.to >= n) throw PreconditionFailed("edge to unknown vertex " + std::to_string(e.to));
        if (i > 0 && adj[i - 1].to >= e.to) {
          throw PreconditionFailed("adjacency of vertex " + std::to_string(x) + " is not sorted and simple");
        }
        if (FieldOps<F>::sign(e.weight) <= 0) {
          throw PreconditionFailed("weight b(" + std::to_string(x) + "," + std::to_string(e.to) +
                                   ") is not positive");
        }
        const auto& back = d.adjacency[e.to];
        const auto it = std::lower_bound(back.begin(), back.end(), x,
                                         [](const Neighbor<F>& nb, Vertex v) { return nb.to < v; });
        if (it == back.end() || it->to != x || !FieldOps<F>::approx_equal(it->weight, e.weight)) {
          throw PreconditionFailed("weights are not symmetric at (" + std::to_string(x) + "," +
                                   std::to_string(e.to) + ")");
        }
      }
    }
  }

  std::shared_ptr<const GraphData<F>> data_;
  std::shared_ptr<const Generator> generator_;
  std::shared_ptr<const SphericalProfile<F>> profile_;
  std::size_t radius_ = 0;
};

namespace detail {

template <class F>
void add_edge(GraphData<F>& d, Vertex x, Vertex y, const F& w) {
  d.adjacency[x].push_back({y, w});
  d.adjacency[y].push_back({x, w});
}

template <class F>
void sort_adjacency(GraphData<F>& d) {
  for (auto& adj : d.adjacency) {
    std::sort(adj.begin(), adj.end(), [](const Neighbor<F>& a, const Neighbor<F>& b) { return a.to < b.to; });
  }
}

/// BFS distances from `a` over the materialized graph, up to depth
/// `max_depth`. Returns (vertex, distance) in BFS order; the second value is
/// false when an incomplete vertex at distance < max_depth was reached.
template <OrderedField F>
std::pair<std::vector<std::pair<Vertex, std::size_t>>, bool> bfs(const WeightedGraph<F>& g, Vertex a,
                                                                 std::size_t max_depth) {
  std::vector<std::pair<Vertex, std::size_t>> order;
  std::vector<char> seen(g.vertex_count(), 0);
  std::deque<std::pair<Vertex, std::size_t>> queue;
  queue.emplace_back(a, 0);
  seen[a] = 1;
  bool exact = true;
  while (!queue.empty()) {
    const auto [x, d] = queue.front();
    queue.pop_front();
    order.emplace_back(x, d);
    if (d >= max_depth) continue;
    if (!g.complete(x)) {
      exact = false;
      continue;
    }
    for (const auto& n : g.neighbors(x)) {
      if (!seen[n.to]) {
        seen[n.to] = 1;
        queue.emplace_back(n.to, d + 1);
      }
    }
  }
  return {std::move(order), exact};
}

}  // namespace detail

/// Snapshot of g in which every vertex at distance < depth from a is
/// complete, so B_{depth+1}(a) and all its edges are known. Grows through
/// the generator as needed.
template <OrderedField F>
WeightedGraph<F> covering(const WeightedGraph<F>& g, Vertex a, std::size_t depth) {
  WeightedGraph<F> h = g;
  for (int attempt = 0; attempt < 64; ++attempt) {
    if (a < h.vertex_count()) {
      auto [order, exact] = detail::bfs(h, a, depth);
      bool ok = exact;
      for (const auto& [x, d] : order) {
        if (d < depth && !h.complete(x)) ok = false;
      }
      if (ok) return h;
    }
    if (!h.has_generator()) {
      throw HorizonExhausted("ball of radius " + std::to_string(depth) + " around vertex " + std::to_string(a) +
                             " exceeds the finite horizon");
    }
    h = h.grown(std::max(2 * h.radius(), h.radius() + depth + 1));
  }
  throw HorizonExhausted("horizon growth did not converge");
}

/// Snapshot in which every vertex of `vertices` is complete.
template <OrderedField F>
WeightedGraph<F> covering_set(const WeightedGraph<F>& g, const std::vector<Vertex>& vertices) {
  WeightedGraph<F> h = g;
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool ok = true;
    for (Vertex x : vertices) {
      if (x >= h.vertex_count() || !h.complete(x)) ok = false;
    }
    if (ok) return h;
    if (!h.has_generator()) throw HorizonExhausted("vertex set exceeds the finite horizon");
    h = h.grown(2 * h.radius() + 1);
  }
  throw HorizonExhausted("horizon growth did not converge");
}

/// B_n(a) = {x : d(a, x) < n} in breadth-first order from a.
template <OrderedField F>
std::vector<Vertex> ball(const WeightedGraph<F>& g, Vertex a, std::size_t n) {
  if (n < 1) throw PreconditionFailed("ball radius must be at least 1");
  const WeightedGraph<F> h = covering(g, a, n - 1);
  auto [order, exact] = detail::bfs(h, a, n - 1);
  std::vector<Vertex> out;
  out.reserve(order.size());
  for (const auto& p : order) out.push_back(p.first);
  return out;
}

/// Combinatorial distance from a to every vertex within `depth`.
template <OrderedField F>
std::map<Vertex, std::size_t> distances(const WeightedGraph<F>& g, Vertex a, std::size_t depth) {
  const WeightedGraph<F> h = covering(g, a, depth);
  auto [order, exact] = detail::bfs(h, a, depth);
  return {order.begin(), order.end()};
}

/// b(dW) = sum over x in W, y outside W of b(x, y).
template <OrderedField F>
F boundary_weight(const WeightedGraph<F>& g, const std::vector<Vertex>& W) {
  const WeightedGraph<F> h = covering_set(g, W);
  const std::set<Vertex> in(W.begin(), W.end());
  F sum(0);
  for (Vertex x : W) {
    for (const auto& n : h.neighbors(x)) {
      if (!in.count(n.to)) sum += n.weight;
    }
  }
  return sum;
}

/// Least valuation among boundary edges of W (the valuation of the largest
/// boundary edge); nullopt when W has no boundary edge.
template <OrderedField F>
ExtRational max_boundary_edge_valuation(const WeightedGraph<F>& g, const std::vector<Vertex>& W) {
  const WeightedGraph<F> h = covering_set(g, W);
  const std::set<Vertex> in(W.begin(), W.end());
  ExtRational best;
  for (Vertex x : W) {
    for (const auto& n : h.neighbors(x)) {
      if (!in.count(n.to)) best = ext_min(best, FieldOps<F>::valuation(n.weight));
    }
  }
  return best;
}

/// Path graph on N_0 with b(k, k+1) = rule(k) and m = 1.
template <OrderedField F>
WeightedGraph<F> make_path(const WeightRule<F>& rule, std::size_t radius = 8) {
  auto profile = std::make_shared<SphericalProfile<F>>(SphericalProfile<F>{rule, std::nullopt, SphereSizes::constant_one()});
  auto gen = [rule](std::size_t r) {
    GraphData<F> d;
    d.adjacency.resize(r + 1);
    d.measure.assign(r + 1, F(1));
    d.complete.assign(r + 1, true);
    d.complete[r] = false;
    d.level.resize(r + 1);
    for (std::size_t k = 0; k <= r; ++k) d.level[k] = k;
    for (std::size_t k = 0; k < r; ++k) detail::add_edge(d, k, k + 1, rule(k));
    detail::sort_adjacency(d);
    return d;
  };
  return WeightedGraph<F>::generated(gen, radius, std::move(profile));
}

/// Finite path with the given edge weights b(k, k+1) = weights[k].
template <OrderedField F>
WeightedGraph<F> make_finite_path(const std::vector<F>& weights) {
  GraphData<F> d;
  const std::size_t n = weights.size() + 1;
  d.adjacency.resize(n);
  d.measure.assign(n, F(1));
  d.level.resize(n);
  for (std::size_t k = 0; k < n; ++k) d.level[k] = k;
  for (std::size_t k = 0; k + 1 < n; ++k) detail::add_edge(d, k, k + 1, weights[k]);
  detail::sort_adjacency(d);
  return WeightedGraph<F>::finite(std::move(d));
}

/// Finite graph from an edge list. Levels are BFS distances from vertex 0.
template <OrderedField F>
WeightedGraph<F> make_explicit(std::size_t vertex_count, const std::vector<std::tuple<Vertex, Vertex, F>>& edges,
                               std::optional<std::vector<F>> measure = std::nullopt) {
  GraphData<F> d;
  d.adjacency.resize(vertex_count);
  if (measure) {
    if (measure->size() != vertex_count) throw PreconditionFailed("measure list length does not match vertices");
    d.measure = *measure;
  } else {
    d.measure.assign(vertex_count, F(1));
  }
  std::set<std::pair<Vertex, Vertex>> seen;
  for (const auto& [x, y, w] : edges) {
    if (x >= vertex_count || y >= vertex_count) throw PreconditionFailed("edge endpoint out of range");
    if (x == y) throw PreconditionFailed("loop at vertex " + std::to_string(x));
    if (!seen.insert({std::min(x, y), std::max(x, y)}).second) {
      throw PreconditionFailed("duplicate edge (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
    detail::add_edge(d, x, y, w);
  }
  detail::sort_adjacency(d);
  d.level.assign(vertex_count, 0);
  d.complete.assign(vertex_count, true);
  std::vector<char> seen_v(vertex_count, 0);
  std::deque<Vertex> q{0};
  seen_v[0] = 1;
  std::size_t reached = 0;
  while (!q.empty()) {
    const Vertex x = q.front();
    q.pop_front();
    ++reached;
    for (const auto& n : d.adjacency[x]) {
      if (!seen_v[n.to]) {
        seen_v[n.to] = 1;
        d.level[n.to] = d.level[x] + 1;
        q.push_back(n.to);
      }
    }
  }
  if (reached != vertex_count) throw PreconditionFailed("graph is not connected");
  return WeightedGraph<F>::finite(std::move(d));
}

/// Layered realization of a weakly spherically symmetric profile rooted at
/// vertex 0. Spheres are consecutive id ranges. When #S_k divides #S_{k+1}
/// each vertex of S_k gets its own block of children; otherwise S_k and
/// S_{k+1} are joined completely. Edge weights are chosen so that every
/// vertex of S_k has outward weight b+(k) and inward weight b-(k).
template <OrderedField F>
WeightedGraph<F> make_spherical(const SphericalProfile<F>& p, std::size_t radius = 6) {
  p.check_compatible(radius);
  auto profile = std::make_shared<SphericalProfile<F>>(p);
  auto gen = [profile](std::size_t r) {
    profile->check_compatible(r);
    std::vector<std::size_t> start(r + 2, 0);
    for (std::size_t k = 0; k <= r; ++k) start[k + 1] = start[k] + profile->sizes(k);
    GraphData<F> d;
    const std::size_t n = start[r + 1];
    d.adjacency.resize(n);
    d.measure.assign(n, F(1));
    d.complete.assign(n, false);
    d.level.resize(n);
    for (std::size_t k = 0; k <= r; ++k) {
      for (std::size_t v = start[k]; v < start[k + 1]; ++v) {
        d.level[v] = k;
        d.complete[v] = k < r;
      }
    }
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t sk = profile->sizes(k);
      const std::size_t sk1 = profile->sizes(k + 1);
      const F bp = profile->plus(k);
      if (sk1 % sk == 0) {
        const std::size_t fan = sk1 / sk;
        const F w = bp / F(static_cast<long>(fan));
        for (std::size_t i = 0; i < sk1; ++i) detail::add_edge(d, start[k] + i / fan, start[k + 1] + i, w);
      } else {
        const F w = bp / F(static_cast<long>(sk1));
        for (std::size_t i = 0; i < sk; ++i) {
          for (std::size_t j = 0; j < sk1; ++j) detail::add_edge(d, start[k] + i, start[k + 1] + j, w);
        }
      }
    }
    detail::sort_adjacency(d);
    return d;
  };
  return WeightedGraph<F>::generated(gen, radius, std::move(profile));
}

}  // namespace nacap
