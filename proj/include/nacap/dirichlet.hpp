#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nacap/errors.hpp"
#include "nacap/field_traits.hpp"
#include "nacap/graph.hpp"

namespace nacap {

enum class Normalization { potential, charge };

/// Solution of a Dirichlet problem on a finite set K with root a.
///   potential: v(a) = 1, harmonic on K \ {a}, zero outside K
///   charge:    Delta_K v = 1_a on K, zero outside K
template <class F>
struct DirichletSolution {
  std::vector<Vertex> K;
  Vertex root = 0;
  VertexFunction<F> values;
  Normalization normalization = Normalization::potential;
  F energy;
  F capacity;

  F operator()(Vertex x) const { return value_at(values, x); }

  /// Smallest guarantee exponent among the stored values, energy and capacity.
  ExtRational min_guarantee() const {
    ExtRational g = ext_min(FieldOps<F>::guarantee(energy), FieldOps<F>::guarantee(capacity));
    for (const auto& [x, v] : values) g = ext_min(g, FieldOps<F>::guarantee(v));
    return g;
  }
};

/// Delta f(x) = (1/m(x)) sum_y (f(x) - f(y)) b(x, y).
template <OrderedField F>
F laplacian_apply(const WeightedGraph<F>& g, const VertexFunction<F>& f, Vertex x) {
  const WeightedGraph<F> h = covering_set(g, {x});
  const F fx = value_at(f, x);
  F sum(0);
  for (const auto& n : h.neighbors(x)) sum += (fx - value_at(f, n.to)) * n.weight;
  return sum / h.measure(x);
}

/// Delta f(x) for a function given pointwise.
template <OrderedField F, class Fn>
F laplacian_apply_fn(const WeightedGraph<F>& g, Fn&& f, Vertex x) {
  const WeightedGraph<F> h = covering_set(g, {x});
  const F fx = f(x);
  F sum(0);
  for (const auto& n : h.neighbors(x)) sum += (fx - f(n.to)) * n.weight;
  return sum / h.measure(x);
}

/// Q(phi) = 1/2 sum_{x,y} (phi(x) - phi(y))^2 b(x, y).
template <OrderedField F>
F energy(const WeightedGraph<F>& g, const VertexFunction<F>& phi) {
  std::vector<Vertex> support;
  for (const auto& [x, v] : phi) support.push_back(x);
  const WeightedGraph<F> h = covering_set(g, support);
  F sum(0);
  for (Vertex x : support) {
    const F px = phi.at(x);
    for (const auto& n : h.neighbors(x)) {
      const auto it = phi.find(n.to);
      if (it == phi.end()) {
        sum += px * px * n.weight;  // edge counted once: y outside the support
      } else if (x < n.to) {
        const F d = px - it->second;
        sum += d * d * n.weight;
      }
    }
  }
  return sum;
}

/// <f, g> = sum_x f(x) g(x) m(x).
template <OrderedField F>
F inner_product(const WeightedGraph<F>& g, const VertexFunction<F>& f, const VertexFunction<F>& h) {
  F sum(0);
  for (const auto& [x, v] : f) {
    const auto it = h.find(x);
    if (it != h.end()) sum += v * it->second * g.measure(x);
  }
  return sum;
}

namespace detail {

/// Solves A x = rhs by Gaussian elimination over an ordered field. Pivots
/// must have a certified sign; the diagonal entry is preferred. Exact zeros
/// are skipped, so banded systems stay cheap.
template <OrderedField F>
std::vector<F> solve_linear(std::vector<std::vector<F>> A, std::vector<F> rhs) {
  const std::size_t n = rhs.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t pivot = n;
    if (certified_nonzero(A[j][j])) {
      pivot = j;
    } else {
      for (std::size_t i = j + 1; i < n; ++i) {
        if (certified_nonzero(A[i][j])) {
          pivot = i;
          break;
        }
      }
    }
    if (pivot == n) {
      bool all_zero = true;
      for (std::size_t i = j; i < n; ++i) all_zero = all_zero && FieldOps<F>::is_exact_zero(A[i][j]);
      if (all_zero) throw DomainError("singular Dirichlet system");
      throw PrecisionExhausted("no pivot with certified sign in column " + std::to_string(j));
    }
    if (pivot != j) {
      std::swap(A[pivot], A[j]);
      std::swap(rhs[pivot], rhs[j]);
    }
    const F inv = F(1) / A[j][j];
    std::vector<std::size_t> nz;
    for (std::size_t c = j + 1; c < n; ++c) {
      if (!FieldOps<F>::is_exact_zero(A[j][c])) nz.push_back(c);
    }
    for (std::size_t i = j + 1; i < n; ++i) {
      if (FieldOps<F>::is_exact_zero(A[i][j])) continue;
      const F f = A[i][j] * inv;
      A[i][j] = F(0);
      for (std::size_t c : nz) A[i][c] -= f * A[j][c];
      if (!FieldOps<F>::is_exact_zero(rhs[j])) rhs[i] -= f * rhs[j];
    }
  }
  std::vector<F> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    F s = rhs[ii];
    for (std::size_t c = ii + 1; c < n; ++c) {
      if (!FieldOps<F>::is_exact_zero(A[ii][c])) s -= A[ii][c] * x[c];
    }
    x[ii] = s / A[ii][ii];
  }
  return x;
}

template <OrderedField F>
void check_domain(const WeightedGraph<F>& g, const std::vector<Vertex>& K, Vertex a) {
  const std::set<Vertex> in(K.begin(), K.end());
  if (in.size() != K.size()) throw PreconditionFailed("vertex set K has duplicates");
  if (!in.count(a)) throw PreconditionFailed("root " + std::to_string(a) + " is not in K");
  std::set<Vertex> seen{a};
  std::deque<Vertex> q{a};
  while (!q.empty()) {
    const Vertex x = q.front();
    q.pop_front();
    for (const auto& n : g.neighbors(x)) {
      if (in.count(n.to) && seen.insert(n.to).second) q.push_back(n.to);
    }
  }
  if (seen.size() != K.size()) throw PreconditionFailed("vertex set K is not connected");
}

/// Matrix of the operator u -> m * Delta_K u restricted to the listed
/// unknowns (rows b(x) u(x) - sum_{y unknown} b(x, y) u(y)).
template <OrderedField F>
std::vector<std::vector<F>> dirichlet_matrix(const WeightedGraph<F>& g, const std::vector<Vertex>& unknowns) {
  const std::size_t n = unknowns.size();
  std::map<Vertex, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[unknowns[i]] = i;
  std::vector<std::vector<F>> A(n, std::vector<F>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex x = unknowns[i];
    F deg(0);
    for (const auto& nb : g.neighbors(x)) {
      deg += nb.weight;
      const auto it = index.find(nb.to);
      if (it != index.end()) A[i][it->second] = -nb.weight;
    }
    A[i][i] = deg;
  }
  return A;
}

}  // namespace detail

/// Solves Delta_K u = phi on K with u = 0 outside K.
template <OrderedField F>
VertexFunction<F> dirichlet_inverse_apply(const WeightedGraph<F>& g, const std::vector<Vertex>& K,
                                          const VertexFunction<F>& phi) {
  if (K.empty()) throw PreconditionFailed("empty vertex set K");
  const WeightedGraph<F> h = covering_set(g, K);
  detail::check_domain(h, K, K.front());
  for (const auto& [x, v] : phi) {
    if (std::find(K.begin(), K.end(), x) == K.end() && !FieldOps<F>::is_exact_zero(v)) {
      throw PreconditionFailed("right-hand side is not supported in K");
    }
  }
  auto A = detail::dirichlet_matrix(h, K);
  std::vector<F> rhs(K.size());
  for (std::size_t i = 0; i < K.size(); ++i) rhs[i] = value_at(phi, K[i]) * h.measure(K[i]);
  const auto u = detail::solve_linear(std::move(A), std::move(rhs));
  VertexFunction<F> out;
  for (std::size_t i = 0; i < K.size(); ++i) out[K[i]] = u[i];
  return out;
}

/// Unique solution of the potential-normalized Dirichlet problem on K.
template <OrderedField F>
DirichletSolution<F> solve_dp(const WeightedGraph<F>& g, const std::vector<Vertex>& K, Vertex a) {
  const WeightedGraph<F> h = covering_set(g, K);
  detail::check_domain(h, K, a);
  DirichletSolution<F> sol;
  sol.K = K;
  sol.root = a;
  sol.normalization = Normalization::potential;
  sol.values[a] = F(1);

  std::vector<Vertex> interior;
  for (Vertex x : K) {
    if (x != a) interior.push_back(x);
  }
  if (!interior.empty()) {
    auto A = detail::dirichlet_matrix(h, interior);
    std::vector<F> rhs(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i) rhs[i] = h.weight(interior[i], a);
    const auto v = detail::solve_linear(std::move(A), std::move(rhs));
    for (std::size_t i = 0; i < interior.size(); ++i) sol.values[interior[i]] = v[i];
  }

  // m(x) Delta v(x) for x in K, summed into <Delta v, v> and read off at a.
  F energy_sum(0);
  F charge_at_root(0);
  for (Vertex x : K) {
    const F vx = sol.values.at(x);
    F m_lap(0);
    for (const auto& n : h.neighbors(x)) m_lap += (vx - value_at(sol.values, n.to)) * n.weight;
    energy_sum += m_lap * vx;
    if (x == a) charge_at_root = m_lap;
  }
  sol.energy = energy_sum;
  sol.capacity = charge_at_root;

  for (Vertex x : K) {
    const F& vx = sol.values.at(x);
    if (FieldOps<F>::sign(vx) <= 0 || !FieldOps<F>::le_within_guarantee(vx, F(1))) {
      throw Error("maximum principle violated at vertex " + std::to_string(x) + ": v = " + FieldOps<F>::format(vx));
    }
  }
  return sol;
}

/// Charge-normalized solution: Delta_K v~ = 1_a, so cap_K(a) = m(a) / v~(a).
template <OrderedField F>
DirichletSolution<F> solve_renormalized(const WeightedGraph<F>& g, const std::vector<Vertex>& K, Vertex a) {
  const WeightedGraph<F> h = covering_set(g, K);
  detail::check_domain(h, K, a);
  DirichletSolution<F> sol;
  sol.K = K;
  sol.root = a;
  sol.normalization = Normalization::charge;
  sol.values = dirichlet_inverse_apply(h, K, VertexFunction<F>{{a, F(1)}});
  for (Vertex x : K) {
    if (FieldOps<F>::sign(sol.values.at(x)) <= 0) {
      throw Error("renormalized solution is not positive at vertex " + std::to_string(x));
    }
  }
  const F& va = sol.values.at(a);
  sol.capacity = h.measure(a) / va;
  sol.energy = va * h.measure(a);  // <Delta_K v~, v~> = v~(a) m(a)
  return sol;
}

/// cap_K(a) = Delta v(a) m(a).
template <OrderedField F>
F effective_capacity(const WeightedGraph<F>& g, const std::vector<Vertex>& K, Vertex a) {
  return solve_dp(g, K, a).capacity;
}

/// Column y of the inverse Dirichlet Laplacian on K: x -> G_K(x, y).
template <OrderedField F>
VertexFunction<F> green_matrix(const WeightedGraph<F>& g, const std::vector<Vertex>& K, Vertex y) {
  const WeightedGraph<F> h = covering_set(g, K);
  detail::check_domain(h, K, y);
  return dirichlet_inverse_apply(h, K, VertexFunction<F>{{y, F(1)}});
}

}  // namespace nacap
