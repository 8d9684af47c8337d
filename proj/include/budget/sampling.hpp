#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>

#include "budget/meadow.hpp"

namespace budget {

/// Derives an independent stream seed from a root seed and a stream index
/// (splitmix64 finalizer). Parallel trials use this so results do not depend
/// on how trials are scheduled.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

/// Draws rationals for randomized equivalence checks.
///
/// Numerators are drawn from [-num_bound, num_bound] and denominators from
/// [1, den_bound]. With probability zero_weight the value is exactly 0 so
/// that x/x and 1/x hit their totalized branch often.
struct SamplingPolicy {
  long num_bound = 12;
  long den_bound = 6;
  double zero_weight = 0.25;
  double integer_weight = 0.4;
};

class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed, SamplingPolicy policy = {});

  Rational next();
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  SamplingPolicy policy_;
};

}  // namespace budget
