#include "semsum/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace semsum {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  const std::uint64_t key = mix(seed_ + kGolden) ^ mix(stream_ * kGolden + 1);
  return mix(key + counter_++ * kGolden);
}

double CounterRng::next_unit() {
  // 53 significand bits, shifted off zero so log() stays finite.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> simplex_uniform_sample(std::size_t dim, CounterRng& rng) {
  if (dim < 2) throw std::domain_error("simplex_uniform_sample requires dim >= 2");
  std::vector<double> p(dim);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(rng.next_unit());
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace semsum
