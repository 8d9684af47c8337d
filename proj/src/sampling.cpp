#include "budget/sampling.hpp"

namespace budget {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RationalSampler::RationalSampler(std::uint64_t seed, SamplingPolicy policy)
    : rng_(seed), policy_(policy) {}

Rational RationalSampler::next() {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng_) < policy_.zero_weight) return Rational();
  std::uniform_int_distribution<long> num(-policy_.num_bound, policy_.num_bound);
  if (coin(rng_) < policy_.integer_weight) return Rational(num(rng_));
  std::uniform_int_distribution<long> den(1, policy_.den_bound);
  return Rational::make(num(rng_), den(rng_));
}

}  // namespace budget
