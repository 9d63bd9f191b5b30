// Acceptance report: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "nacap/nacap.hpp"
#include "property/properties.hpp"
#include "support/support.hpp"

using namespace nacap;
using namespace nacap::testing;

namespace {

// Pinned tolerances and ranges.
constexpr std::size_t kUnitPathMax = 100;
constexpr std::size_t kNullExampleMax = 20;
constexpr std::size_t kClassifyHorizon = 10;
constexpr std::size_t kDichotomyMax = 40;
constexpr long kNeumannValuation = 8;
constexpr std::size_t kNeumannMaxN = 200;
constexpr std::size_t kGreenRadius = 12;
constexpr std::size_t kSuperharmonicLength = 12;
constexpr std::size_t kRealSweepN = 25;
constexpr double kRealTolerance = 1e-6;
constexpr long kRealPower = 3;
constexpr std::size_t kNullRealN = 12;
constexpr double kNullRealBound = 1e-6;
constexpr std::size_t kHardySamples = 10;

LCElement eps(const Rational& q = 1) { return LCElement::epsilon(q); }

std::vector<Vertex> range(std::size_t n) {
  std::vector<Vertex> out;
  for (Vertex x = 0; x < n; ++x) out.push_back(x);
  return out;
}

struct Result {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) note << "; ";
      note << what;
      pass = false;
    }
  }
};

Result ac1() {
  Result r;
  const auto unit = capacity_sequence(make_path(WeightRule<Rational>::constant(1)), 0, kUnitPathMax);
  for (std::size_t n = 1; n <= kUnitPathMax; ++n) {
    r.require(unit.at(n) == make_rational(1, static_cast<long>(n)), "unit path cap_" + std::to_string(n) + " != 1/n");
  }
  const auto g1 = make_path(WeightRule<LCElement>::eps_pow_k());
  const auto seq = capacity_sequence(g1, 0, kNullExampleMax);
  LCElement partial(0);
  for (std::size_t n = 1; n <= kNullExampleMax; ++n) {
    partial += eps(static_cast<long>(n) - 1);
    const LCElement closed = eps(static_cast<long>(n) - 1) / partial;
    r.require(approx_equal(seq.at(n), closed), "example 1 closed form at n=" + std::to_string(n));
    r.require(seq.at(n).valuation() == ExtRational(Rational(static_cast<long>(n) - 1)),
              "example 1 valuation at n=" + std::to_string(n));
  }
  const auto v1 = classify_spherical(*g1.profile(), kClassifyHorizon);
  const auto v2 = classify_spherical(*make_path(WeightRule<LCElement>::eps_pow_neg_k()).profile(), kClassifyHorizon);
  const auto v3 = classify_spherical(*make_path(WeightRule<LCElement>::constant(1)).profile(), kClassifyHorizon);
  r.require(v1.kind == CapacityKind::null, "example 1 not null");
  r.require(v2.kind == CapacityKind::positive && v2.limit && approx_equal(*v2.limit, LCElement(1) - eps()),
            "example 2 not positive with limit 1 - eps");
  r.require(v3.kind == CapacityKind::divergent, "unit path not divergent");
  if (r.pass) r.note << "cap_n = 1/n for n <= 100; example 1 closed form and valuations n <= 20; null/positive/divergent";
  return r;
}

WeightedGraph<LCElement> example4() {
  return make_path(WeightRule<LCElement>::eps_pow_neg_k(1, 1).with_prefix({LCElement(1), LCElement(1)}));
}

Result ac2() {
  Result r;
  const TransitionContext<LCElement> ctx(example4());
  const LCElement p2 = pn_element(ctx, 0, 0, 2);
  r.require(p2.is_exact() && p2 == LCElement(make_rational(1, 2)), "P^2(0,0) = " + format(p2));
  const auto nd = non_decay_certificate(ctx, 0);
  r.require(nd.has_value(), "no non-decay certificate");
  if (r.pass) r.note << "P^2(0,0) = 1/2 exactly; P^" << nd->k << "j(0,0) >= (" << nd->c.get_str() << ")^j";
  return r;
}

Result ac3() {
  Result r;
  PrecisionScope scope(PrecisionConfig{4, 32});
  const auto g = make_path(WeightRule<LCElement>::eps_pow_half_pow_k());
  const TransitionContext<LCElement> restricted(g, range(5));
  const auto restricted_series = pn_series(restricted, 0, 0, 2 * kDichotomyMax);
  std::optional<Rational> prev;
  for (std::size_t n = 1; n <= kDichotomyMax; ++n) {
    const auto val = restricted_series[2 * n].valuation_lower_bound();
    r.require(val.has_value(), "restricted P^" + std::to_string(2 * n) + " has no valuation bound");
    if (!val) break;
    if (prev) r.require(*val > *prev, "restricted valuation not increasing at n=" + std::to_string(n));
    prev = *val;
  }
  const auto cert = min_mean_cycle_certificate(restricted);
  r.require(cert.slope && *cert.slope > 0, "no positive min-mean-cycle slope on L");
  const TransitionContext<LCElement> full(g);
  const auto pi = pi_series(full, 0, 0, 2 * kDichotomyMax);
  for (std::size_t n = 1; n <= kDichotomyMax; ++n) {
    r.require(pi[2 * n] > eps(2), "Pi^" + std::to_string(2 * n) + "(0,0) not above eps^2");
  }
  r.require(classify_generic(g, 0, kClassifyHorizon).kind == CapacityKind::divergent, "not divergent");
  if (r.pass) {
    r.note << "restricted valuations increase to " << prev->get_str() << " by n=40; Pi^2n > eps^2; divergent";
  }
  return r;
}

Result ac4() {
  Result r;
  const auto g = make_path(WeightRule<LCElement>::eps_pow_neg_k()).with_degree_measure();
  const TransitionContext<LCElement> ctx(g);
  const LCElement target = (LCElement(1) - eps()).inverse();
  std::optional<std::size_t> hit;
  for (std::size_t N : {10, 20, 40, 80, 160, 200}) {
    if (N > kNeumannMaxN) break;
    const auto diff = neumann_partial(ctx, 0, 0, N).sum - target;
    const auto v = diff.valuation_lower_bound();
    if (v && *v >= kNeumannValuation) {
      hit = N;
      break;
    }
  }
  r.require(hit.has_value(), "Neumann partial sum never within eps^8 of 1/(1 - eps)");
  const auto K = ball(g, 0, kGreenRadius);
  const LCElement g00 = green_matrix(g, K, 0).at(0);
  const LCElement expected = g.measure(0) / effective_capacity(g, K, 0);
  r.require(approx_equal(g00, expected), "green(0,0) = " + format(g00) + " vs " + format(expected));
  if (r.pass) r.note << "valuation >= 8 at N=" << *hit << "; green(0,0) = m(0)/cap_12(0)";
  return r;
}

Result ac5() {
  Result r;
  std::size_t reruns = 0;
  for (const auto& p : properties::all()) {
    const CaseStats s = p.run();
    reruns += s.reruns;
    r.require(s.passed == properties::kCases && s.failures.empty(),
              std::string(p.name) + " " + std::to_string(s.passed) + "/" + std::to_string(properties::kCases) +
                  (s.failures.empty() ? "" : " (" + s.failures.front() + ")"));
  }
  if (r.pass) {
    r.note << properties::all().size() << " properties x " << properties::kCases << " cases, " << reruns
           << " reruns at a doubled window";
  }
  return r;
}

VertexFunction<LCElement> example6_u(std::size_t n) {
  VertexFunction<LCElement> u;
  for (std::size_t k = 0; k < n; ++k) u[k] = LCElement(1) - LCElement(static_cast<long>(k)) * eps();
  return u;
}

VertexFunction<LCElement> example7_u(std::size_t n) {
  VertexFunction<LCElement> u;
  for (std::size_t x = 0; x < n; ++x) {
    const long k = static_cast<long>((x + 1) / 2);
    const long a = x % 2 == 0 ? k : k - 1;
    u[x] = LCElement(1) - LCElement(a) * eps() - LCElement(k) * eps(2);
  }
  return u;
}

Result ac6() {
  Result r;
  const auto g6 = make_path(WeightRule<LCElement>::constant(1));
  const auto u6 = example6_u(kSuperharmonicLength);
  const auto s6 = is_superharmonic(g6, u6, range(kSuperharmonicLength - 1));
  r.require(s6.holds, "example 6 not superharmonic");
  r.require(s6.laplacian.at(0) == eps() / g6.measure(0), "example 6 laplacian at 0 is " + format(s6.laplacian.at(0)));
  const auto g7 = make_path(WeightRule<LCElement>::periodic({LCElement(1), eps()}));
  r.require(is_superharmonic(g7, example7_u(kSuperharmonicLength), range(kSuperharmonicLength - 1)).holds,
            "example 7 not superharmonic");
  const auto c = construct_superharmonic(g6, 0, LCElement(1), eps(), kSuperharmonicLength - 2);
  for (const auto& [x, v] : c.values) r.require(v == u6.at(x), "construction differs at " + std::to_string(x));
  if (r.pass) r.note << "example 6 with laplacian(0) = eps exactly; example 7; construction reproduces example 6";
  return r;
}

Result ac7() {
  Result r;
  const auto g8 = make_path(WeightRule<RFElement>::factorial_eps(1, 1));
  const std::vector<Rational> rs{make_rational(1, 2), make_rational(1, 4), make_rational(1, 8)};
  const auto rows = real_sweep(g8, 0, kRealPower, rs, kRealSweepN);
  Rational sum(0), term(1);
  for (long k = 0; k < static_cast<long>(kRealSweepN); ++k) {
    if (k > 0) term = term * 2 / k;
    sum += term;
  }
  r.require(rows[0].capacity == 1 / sum, "cap_25 at r=1/2 differs from the partial sum");
  const double dev = std::fabs(rows[0].capacity.get_d() - std::exp(-2.0));
  r.require(dev <= kRealTolerance, "cap_25 at r=1/2 is " + std::to_string(dev) + " from e^-2");
  std::ostringstream scaled;
  for (std::size_t i = 0; i < rows.size(); ++i) scaled << (i ? ", " : "") << rows[i].scaled.get_d();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    r.require(rows[i].scaled < rows[i - 1].scaled, "r^-3 cap not decreasing over r = 1/2, 1/4, 1/8: " + scaled.str());
  }
  const auto g9 = make_path(WeightRule<RFElement>::factorial_eps(-1, -1));
  Rational prev(2);
  for (std::size_t N = 1; N <= kNullRealN; ++N) {
    const Rational c = real_sweep(g9, 0, 0, {make_rational(1, 2)}, N)[0].capacity;
    r.require(c < prev, "example 9 not decreasing at N=" + std::to_string(N));
    prev = c;
  }
  r.require(prev.get_d() < kNullRealBound, "example 9 cap_12 at r=1/2 is " + std::to_string(prev.get_d()));
  if (r.pass) r.note << "partial sum exact, within 1e-6 of e^-2; scaled " << scaled.str() << "; example 9 below 1e-6";
  return r;
}

Result ac8() {
  Result r;
  const auto g2 = make_path(WeightRule<LCElement>::eps_pow_neg_k());
  const auto w = hardy_construct<LCElement>(classify_generic(g2, 0, kClassifyHorizon), 0);
  r.require(w.weight.size() == 1 && approx_equal(w.weight.at(0), LCElement(1) - eps()), "weight is not (1 - eps) 1_0");
  std::vector<VertexFunction<LCElement>> samples;
  for (std::size_t n = 1; n <= kHardySamples; ++n) samples.push_back(solve_dp(g2, ball(g2, 0, n), 0).values);
  r.require(hardy_verify(g2, w, samples).holds, "Hardy inequality fails on v_n");
  const auto g1 = make_path(WeightRule<LCElement>::eps_pow_k());
  bool refused = false;
  try {
    hardy_construct<LCElement>(classify_generic(g1, 0, kClassifyHorizon), 0);
  } catch (const PreconditionFailed&) {
    refused = true;
  }
  r.require(refused, "example 1 construction not refused");
  if (r.pass) r.note << "(1 - eps) 1_0 holds for v_1..v_10; refused on example 1";
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Result r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r.pass = false;
      r.note << "threw: " << e.what();
    }
    failed += r.pass ? 0 : 1;
    std::printf("%s %s  %s\n", name, r.pass ? "PASS" : "FAIL", r.note.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
