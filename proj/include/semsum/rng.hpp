#pragma once

#include <cstdint>
#include <vector>

namespace semsum {

// Counter-based generator: output k of stream s under seed q is a pure hash
// of (q, s, k), so independently seeded streams can run on any worker layout
// and still reproduce bit-identical draws.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1).
  double next_unit();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

// One point uniform on the (dim-1)-simplex: normalized exponential variates,
// equivalent to a symmetric all-ones Dirichlet draw.
std::vector<double> simplex_uniform_sample(std::size_t dim, CounterRng& rng);

}  // namespace semsum
