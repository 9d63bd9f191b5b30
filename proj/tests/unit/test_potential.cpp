#include <gtest/gtest.h>

#include "nacap/nacap.hpp"
#include "support/support.hpp"

using namespace nacap;
using namespace nacap::testing;

namespace {

LCElement eps(const Rational& q = 1) { return LCElement::epsilon(q); }

VertexFunction<LCElement> example6_u(std::size_t n) {
  VertexFunction<LCElement> u;
  for (std::size_t k = 0; k < n; ++k) u[k] = LCElement(1) - LCElement(static_cast<long>(k)) * eps();
  return u;
}

// u(2k) = 1 - k eps - k eps^2, u(2k - 1) = 1 - (k - 1) eps - k eps^2
VertexFunction<LCElement> example7_u(std::size_t n) {
  VertexFunction<LCElement> u;
  for (std::size_t x = 0; x < n; ++x) {
    const long k = static_cast<long>((x + 1) / 2);
    const long a = x % 2 == 0 ? k : k - 1;
    u[x] = LCElement(1) - LCElement(a) * eps() - LCElement(k) * eps(2);
  }
  return u;
}

std::vector<Vertex> range(std::size_t n) {
  std::vector<Vertex> out;
  for (Vertex x = 0; x < n; ++x) out.push_back(x);
  return out;
}

}  // namespace

TEST(Superharmonic, LinearDecayOnUnitPath) {
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  const auto r = is_superharmonic(g, example6_u(10), range(9));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.laplacian.at(0), eps());
  for (Vertex x = 1; x < 9; ++x) EXPECT_EQ(r.laplacian.at(x), LCElement(0));
}

TEST(Superharmonic, AlternatingWeights) {
  const auto g = make_path(WeightRule<LCElement>::periodic({LCElement(1), eps()}));
  const auto r = is_superharmonic(g, example7_u(12), range(11));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.laplacian.at(0), eps(2));
}

TEST(Superharmonic, WitnessAndMissingValues) {
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  VertexFunction<LCElement> u{{0, LCElement(1)}, {1, LCElement(2)}, {2, LCElement(1)}};
  const auto r = is_superharmonic(g, u, {0, 1});
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.witness, std::optional<Vertex>(0));
  EXPECT_THROW(is_superharmonic(g, u, {2}), PreconditionFailed);
}

TEST(Superharmonic, ConstructionReproducesLinearDecay) {
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  const auto s = construct_superharmonic(g, 0, LCElement(1), eps(), 8);
  EXPECT_EQ(s.formula, "1 - |x| tau");
  const auto expected = example6_u(10);
  for (const auto& [x, v] : s.values) EXPECT_EQ(v, expected.at(x)) << x;
  EXPECT_EQ(s.verified_on.size(), 8u);
}

TEST(Superharmonic, ConstructionWithGeometricGrowth) {
  SphericalProfile<LCElement> p{WeightRule<LCElement>::constant(1), std::nullopt, SphereSizes::power(2)};
  const auto g = make_spherical(p);
  // b-(x)/b+(x) = 1/2 per vertex of S_k, k >= 1
  const auto s = construct_superharmonic(g, 0, LCElement(2), eps(), 4);
  EXPECT_EQ(s.formula, "1 - c^|x| tau");
  EXPECT_EQ(s.values.at(3), LCElement(1) - eps() * 4);
}

TEST(Superharmonic, ConstructionPreconditions) {
  const auto g7 = make_path(WeightRule<LCElement>::periodic({LCElement(1), eps()}));
  EXPECT_THROW(construct_superharmonic(g7, 0, LCElement(1000), eps(), 4), PreconditionFailed);
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  EXPECT_THROW(construct_superharmonic(g, 0, LCElement(1), LCElement(Rational(1, 2)), 4), PreconditionFailed);
  EXPECT_THROW(construct_superharmonic(g, 0, eps(-1), eps(), 4), PreconditionFailed);
}

TEST(Harnack, UnitPathConstant) {
  const auto g = make_path(WeightRule<Rational>::constant(1));
  EXPECT_EQ(harnack_constant(g, {0, 1, 2}), 4);
  EXPECT_EQ(harnack_constant(g, {3}), 1);
}

TEST(Harnack, BoundHoldsForPositiveHarmonicFunctions) {
  const auto g = make_path(WeightRule<LCElement>::eps_pow_neg_k());
  const auto sol = solve_dp(g, ball(g, 0, 8), 0);
  const std::vector<Vertex> W{1, 2, 3};
  const LCElement C = harnack_constant(g, W);
  for (Vertex x : W) {
    for (Vertex y : W) EXPECT_TRUE(le_within_guarantee(sol(x), C * sol(y))) << x << "," << y;
  }
}

TEST(GroundState, IdentityOnExamplePath) {
  const auto g = make_path(WeightRule<LCElement>::periodic({LCElement(1), eps()}));
  const auto u = example7_u(8);
  const VertexFunction<LCElement> phi{{1, LCElement(2)}, {2, LCElement(1) - eps()}, {3, eps(-1)}};
  const auto r = ground_state_transform_check(g, u, phi);
  EXPECT_TRUE(r.holds) << format(r.lhs) << " vs " << format(r.rhs);
  EXPECT_THROW(ground_state_transform_check(g, u, VertexFunction<LCElement>{{7, LCElement(1)}}), PreconditionFailed);
}

TEST(EnergyDistance, BoundOnPath) {
  const auto g = make_path(WeightRule<LCElement>::eps_pow_k());
  const LCElement C = energy_distance_constant(g, 0, 3);
  EXPECT_EQ(C, LCElement(6) * eps(-2));
  const VertexFunction<LCElement> phi{{0, LCElement(1)}, {1, eps()}, {2, LCElement(3)}};
  const LCElement d = value_at(phi, 0) - value_at(phi, 3);
  EXPECT_TRUE(le_within_guarantee(d * d, C * energy(g, phi)));
  EXPECT_EQ(energy_distance_constant(g, 2, 2), LCElement(0));
}

TEST(Hardy, PointMassOnPositiveExample) {
  const auto g = make_path(WeightRule<LCElement>::eps_pow_neg_k());
  const auto v = classify_generic(g, 0, 10);
  const auto w = hardy_construct<LCElement>(v, 0);
  EXPECT_EQ(w.provenance, HardyProvenance::point_mass);
  EXPECT_TRUE(approx_equal(w.weight.at(0), LCElement(1) - eps()));
  std::vector<VertexFunction<LCElement>> samples;
  for (std::size_t n = 1; n <= 10; ++n) samples.push_back(solve_dp(g, ball(g, 0, n), 0).values);
  EXPECT_TRUE(hardy_verify(g, w, samples).holds);
  EXPECT_TRUE(hardy_verify(g, w, samples, true).holds);
}

TEST(Hardy, RefusedOnNullExample) {
  const auto g = make_path(WeightRule<LCElement>::eps_pow_k());
  const auto v = classify_generic(g, 0, 10);
  ASSERT_EQ(v.kind, CapacityKind::null);
  EXPECT_THROW(hardy_construct<LCElement>(v, 0), PreconditionFailed);
  const VertexFunction<LCElement> bounds{{0, eps()}};
  EXPECT_THROW(hardy_construct<LCElement>(v, 0, bounds), PreconditionFailed);
}

TEST(Hardy, LowerBoundsOnDivergentExample) {
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  const auto v = classify_generic(g, 0, 8);
  ASSERT_EQ(v.kind, CapacityKind::divergent);
  const auto K = ball(g, 0, 6);
  const auto m = capacity_lower_bounds(g, K);
  for (const auto& [x, mx] : m) {
    EXPECT_EQ(mx, eps(2));
    EXPECT_TRUE(le_within_guarantee(mx, effective_capacity(g, ball(g, x, 12), x)));
  }
  const auto w = hardy_construct<LCElement>(v, 0, m);
  EXPECT_EQ(w.provenance, HardyProvenance::spherical_lower_bounds);
  EXPECT_EQ(w.weight.at(0), eps(2) / 2);
  EXPECT_EQ(w.weight.at(2), eps(2) / 8);
  std::vector<VertexFunction<LCElement>> samples;
  for (std::size_t n = 1; n <= 6; ++n) samples.push_back(solve_dp(g, ball(g, 0, n), 0).values);
  for (Vertex x : K) samples.push_back({{x, LCElement(1)}});
  EXPECT_TRUE(hardy_verify(g, w, samples).holds);
}

TEST(Hardy, GroundStateWeight) {
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  const auto w = ground_state_weight(g, example6_u(10), range(9));
  EXPECT_EQ(w.provenance, HardyProvenance::ground_state);
  ASSERT_EQ(w.weight.size(), 1u);
  EXPECT_EQ(w.weight.at(0), eps());
  std::vector<VertexFunction<LCElement>> samples;
  for (std::size_t n = 1; n <= 8; ++n) samples.push_back(solve_dp(g, ball(g, 0, n), 0).values);
  EXPECT_TRUE(hardy_verify(g, w, samples).holds);
}

TEST(Hardy, VerifyRejectsTooLargeWeight) {
  const auto g = make_path(WeightRule<LCElement>::constant(1));
  HardyWeight<LCElement> w;
  w.weight[0] = LCElement(1);
  std::vector<VertexFunction<LCElement>> samples{solve_dp(g, ball(g, 0, 3), 0).values};
  const auto r = hardy_verify(g, w, samples);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.failing_sample, std::optional<std::size_t>(0));
  HardyWeight<LCElement> zero;
  EXPECT_THROW(hardy_verify(g, zero, samples), PreconditionFailed);
}
