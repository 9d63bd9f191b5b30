#pragma once

// Shared test helpers: seeded generators for small graphs and field
// elements, a case runner that retries indeterminate cases at a doubled
// window, and oracles that do not go through the library's solvers.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "nacap/nacap.hpp"

namespace nacap::testing {

/// Outcome of one randomized case.
enum class Outcome { pass, fail, indeterminate };

inline Outcome check(bool ok) { return ok ? Outcome::pass : Outcome::fail; }

struct CaseStats {
  std::size_t passed = 0;
  std::size_t reruns = 0;
  std::vector<std::string> failures;
};

/// Runs `count` seeded cases. A case that throws PrecisionExhausted or
/// reports indeterminate is rerun with the same seed at twice the window,
/// up to three times; if it still cannot be decided it counts as a failure.
inline CaseStats run_cases(std::size_t count, std::uint64_t base_seed,
                           const std::function<Outcome(std::mt19937_64&)>& body) {
  CaseStats stats;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = base_seed + i;
    PrecisionConfig cfg = current_precision();
    std::string last;
    bool done = false;
    for (int attempt = 0; attempt < 4 && !done; ++attempt) {
      if (attempt > 0) {
        cfg.window *= 2;
        cfg.max_terms *= 2;
        ++stats.reruns;
      }
      PrecisionScope scope(cfg);
      std::mt19937_64 rng(seed);
      try {
        const Outcome o = body(rng);
        if (o == Outcome::pass) {
          ++stats.passed;
          done = true;
        } else if (o == Outcome::fail) {
          last = "failed";
          break;
        } else {
          last = "indeterminate at window " + cfg.window.get_str();
        }
      } catch (const PrecisionExhausted& e) {
        last = std::string("precision exhausted: ") + e.what();
      }
    }
    if (!done) stats.failures.push_back("seed " + std::to_string(seed) + ": " + last);
  }
  return stats;
}

#define NACAP_EXPECT_ALL_PASS(stats, count)                                   \
  do {                                                                         \
    const auto& s_ = (stats);                                                  \
    EXPECT_EQ(s_.passed, (count));                                             \
    for (const auto& f_ : s_.failures) ADD_FAILURE() << f_;                    \
  } while (0)

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long max_den = 3) {
  Rational q(uniform(rng, lo, hi), uniform(rng, 1, max_den));
  q.canonicalize();
  return q;
}

inline Rational random_nonzero_rational(std::mt19937_64& rng) {
  Rational q(0);
  while (q == 0) q = random_rational(rng, -5, 5);
  return q;
}

/// 0 to 4 terms, exponents in [-4, 6] with denominators up to 2.
inline LCElement random_lc(std::mt19937_64& rng, bool allow_zero = true) {
  const long terms = uniform(rng, allow_zero ? 0 : 1, 4);
  LCElement x(0);
  for (long i = 0; i < terms; ++i) {
    x += LCElement::monomial(random_nonzero_rational(rng), random_rational(rng, -4, 6, 2));
  }
  if (!allow_zero && x.is_exact_zero()) x = LCElement(1);
  return x;
}

/// Positive element with non-negative leading exponent bound `max_val`.
inline LCElement random_positive_lc(std::mt19937_64& rng, long max_val = 2) {
  const Rational lead = random_rational(rng, 0, max_val, 2);
  LCElement x = LCElement::monomial(random_rational(rng, 1, 4), lead);
  const long extra = uniform(rng, 0, 3);
  for (long i = 0; i < extra; ++i) {
    x += LCElement::monomial(random_nonzero_rational(rng), lead + random_rational(rng, 1, 4, 2));
  }
  return x;
}

inline RFElement random_rf(std::mt19937_64& rng) {
  std::vector<Rational> num(static_cast<std::size_t>(uniform(rng, 1, 3)));
  std::vector<Rational> den(static_cast<std::size_t>(uniform(rng, 1, 2)));
  for (auto& c : num) c = random_rational(rng, -4, 4);
  for (auto& c : den) c = random_rational(rng, -4, 4);
  if (Polynomial(den).is_zero()) den = {Rational(1)};
  return RFElement(Polynomial(num), Polynomial(den));
}

/// Connected graph on `core` vertices (random spanning tree plus extra
/// edges) and one more vertex, the sink, joined to at least one core vertex.
/// Any connected subset of the core is then a valid Dirichlet domain.
struct RandomGraph {
  WeightedGraph<LCElement> graph;
  std::size_t core = 0;
  std::vector<std::tuple<Vertex, Vertex, LCElement>> edges;
};

inline RandomGraph random_graph(std::mt19937_64& rng, bool degree_measure = false) {
  const std::size_t core = static_cast<std::size_t>(uniform(rng, 1, 5));
  const Vertex sink = core;
  std::map<std::pair<Vertex, Vertex>, LCElement> e;
  auto add = [&](Vertex a, Vertex b) {
    if (a == b) return;
    e.emplace(std::minmax(a, b), random_positive_lc(rng));
  };
  for (Vertex v = 1; v < core; ++v) add(v, static_cast<Vertex>(uniform(rng, 0, static_cast<long>(v) - 1)));
  const long extra = uniform(rng, 0, 3);
  for (long i = 0; i < extra && core > 1; ++i) {
    add(static_cast<Vertex>(uniform(rng, 0, static_cast<long>(core) - 1)),
        static_cast<Vertex>(uniform(rng, 0, static_cast<long>(core) - 1)));
  }
  add(sink, static_cast<Vertex>(uniform(rng, 0, static_cast<long>(core) - 1)));
  if (uniform(rng, 0, 1) == 1) add(sink, static_cast<Vertex>(uniform(rng, 0, static_cast<long>(core) - 1)));

  std::vector<std::tuple<Vertex, Vertex, LCElement>> edges;
  for (const auto& [k, w] : e) edges.emplace_back(k.first, k.second, w);
  std::optional<std::vector<LCElement>> measure;
  if (!degree_measure && uniform(rng, 0, 1) == 1) {
    measure = std::vector<LCElement>();
    for (std::size_t i = 0; i <= core; ++i) measure->push_back(random_positive_lc(rng, 1));
  }
  auto g = make_explicit<LCElement>(core + 1, edges, measure);
  if (degree_measure) g = g.with_degree_measure();
  RandomGraph out{std::move(g), core, std::move(edges)};
  return out;
}

/// Connected prefix of the core in BFS order from `a`.
inline std::vector<Vertex> core_prefix(const RandomGraph& rg, Vertex a, std::size_t size) {
  std::vector<Vertex> order{a};
  std::vector<bool> seen(rg.core + 1, false);
  seen[a] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& n : rg.graph.neighbors(order[i])) {
      if (n.to < rg.core && !seen[n.to]) {
        seen[n.to] = true;
        order.push_back(n.to);
      }
    }
  }
  order.resize(std::min(size, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

/// Random finitely supported function on `support`.
inline VertexFunction<LCElement> random_function(std::mt19937_64& rng, const std::vector<Vertex>& support) {
  VertexFunction<LCElement> f;
  for (Vertex x : support) f[x] = random_lc(rng);
  return f;
}

// ---------------------------------------------------------------------------
// Oracles

/// Series resistance of a path: cap_n(0) = (sum_{k<n} 1/b(k,k+1))^{-1}.
template <class F>
F path_capacity_oracle(const std::function<F(std::size_t)>& b, std::size_t n) {
  F resistance(0);
  for (std::size_t k = 0; k < n; ++k) resistance += F(1) / b(k);
  return F(1) / resistance;
}

/// P^n(x, y) and Pi^n(x, y) by enumerating every walk of length n, with
/// P(u, v) = b(u, v) / m(u) read straight from the adjacency lists.
template <class F>
std::pair<F, F> walk_enumeration_oracle(const WeightedGraph<F>& g, Vertex x, Vertex y, std::size_t n) {
  F sum(0);
  F best(0);
  std::function<void(Vertex, std::size_t, const F&)> go = [&](Vertex v, std::size_t left, const F& prod) {
    if (left == 0) {
      if (v == y) {
        sum += prod;
        // equal walk weights only agree up to the guarantee
        if (!FieldOps<F>::approx_equal(prod, best) && FieldOps<F>::sign(prod - best) > 0) best = prod;
      }
      return;
    }
    for (const auto& nb : g.neighbors(v)) go(nb.to, left - 1, prod * nb.weight / g.measure(v));
  };
  go(x, n, F(1));
  return {sum, best};
}

/// Dense inverse of the Dirichlet matrix by Gauss-Jordan over Q, used as a
/// cross-check for the library's solver on rational graphs.
inline std::vector<std::vector<Rational>> dense_inverse(std::vector<std::vector<Rational>> A) {
  const std::size_t n = A.size();
  std::vector<std::vector<Rational>> I(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (A[p][c] == 0) ++p;
    std::swap(A[p], A[c]);
    std::swap(I[p], I[c]);
    const Rational d = A[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      A[c][j] /= d;
      I[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      const Rational f = A[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        A[r][j] -= f * A[c][j];
        I[r][j] -= f * I[c][j];
      }
    }
  }
  return I;
}

inline std::string fixture(const std::string& name) { return std::string(NACAP_FIXTURE_DIR) + "/" + name + ".json"; }

}  // namespace nacap::testing
