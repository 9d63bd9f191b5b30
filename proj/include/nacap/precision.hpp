#pragma once

#include <cstddef>

#include "nacap/errors.hpp"
#include "nacap/rational.hpp"

namespace nacap {

/// Truncation policy for Levi-Civita arithmetic.
///
/// Every result keeps only the terms in the relative window [v, v + window)
/// above its valuation v, and at most `max_terms` terms. Inversion expands a
/// geometric series of at most `geometric_series_depth` terms (rounded up to
/// a power of two).
struct PrecisionConfig {
  Rational window = 32;
  std::size_t max_terms = 256;
  std::size_t geometric_series_depth = 64;

  void validate() const {
    if (window <= 0) throw PreconditionFailed("precision window must be positive");
    if (max_terms < 1) throw PreconditionFailed("max_terms must be at least 1");
    if (geometric_series_depth < 1) {
      throw PreconditionFailed("geometric_series_depth must be at least 1");
    }
  }
};

namespace detail {
inline PrecisionConfig& current_precision_slot() {
  thread_local PrecisionConfig config;
  return config;
}
}  // namespace detail

/// Precision in effect for arithmetic on the calling thread.
inline const PrecisionConfig& current_precision() { return detail::current_precision_slot(); }

/// RAII override of the calling thread's precision.
class PrecisionScope {
 public:
  explicit PrecisionScope(PrecisionConfig config) : saved_(current_precision()) {
    config.validate();
    detail::current_precision_slot() = std::move(config);
  }
  ~PrecisionScope() { detail::current_precision_slot() = saved_; }

  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  PrecisionConfig saved_;
};

}  // namespace nacap
