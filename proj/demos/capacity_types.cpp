// Classifies a few path graphs over the Levi-Civita field and prints the
// first capacities of each, truncated to a narrow window.

#include <iostream>

#include "nacap/nacap.hpp"

using namespace nacap;

namespace {

void show(const char* label, const WeightedGraph<LCElement>& g) {
  const auto v = classify_generic(g, 0, 10);
  std::cout << label << ": " << to_string(v.kind);
  if (v.limit) std::cout << ", limit " << format(*v.limit);
  std::cout << "\n";
  const auto seq = capacity_sequence(g, 0, 4);
  for (std::size_t n = 1; n <= 4; ++n) std::cout << "  cap_" << n << " = " << format(seq.at(n)) << "\n";
}

}  // namespace

int main() {
  PrecisionScope narrow(PrecisionConfig{6, 32});
  show("b(k,k+1) = e^k", make_path(WeightRule<LCElement>::eps_pow_k()));
  show("b(k,k+1) = e^-k", make_path(WeightRule<LCElement>::eps_pow_neg_k()));
  show("b(k,k+1) = 1", make_path(WeightRule<LCElement>::constant(1)));
  PrecisionScope half(PrecisionConfig{4, 32});
  show("b(k,k+1) = e^(1/2^k)", make_path(WeightRule<LCElement>::eps_pow_half_pow_k()));
}
