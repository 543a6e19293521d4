#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "semsum/errors.hpp"
#include "semsum/model.hpp"
#include "semsum/rational.hpp"

namespace semsum {

template <class Scalar>
Scalar scalar_cast(const Rational& r) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return r;
  else
    return to_double(r);
}

// Probability vector over the 2^v reports, indexed by report mask. The
// backing scalar is either Rational (exact) or double.
template <class Scalar>
class Distribution {
public:
  Distribution(Alphabet alphabet, std::vector<Scalar> probs)
      : alphabet_(alphabet), probs_(std::move(probs)) {
    if (probs_.size() != alphabet_.report_count())
      throw std::invalid_argument("distribution needs one probability per report");
    Scalar sum = 0;
    for (const Scalar& p : probs_) {
      if (p < 0) throw std::invalid_argument("distribution entries must be nonnegative");
      sum += p;
    }
    if constexpr (std::is_same_v<Scalar, Rational>) {
      if (sum != 1) throw std::invalid_argument("rational distribution must sum to exactly 1");
    } else {
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("distribution must sum to 1 within 1e-12");
    }
  }

  static Distribution uniform(Alphabet alphabet) {
    const std::uint32_t size = alphabet.report_count();
    std::vector<Scalar> probs(size, scalar_cast<Scalar>(Rational(1, size)));
    return Distribution(alphabet, std::move(probs));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const Scalar& operator[](Report x) const { return probs_[x.mask]; }
  const std::vector<Scalar>& probs() const { return probs_; }

  Scalar mass(std::span<const Report> reports) const {
    Scalar sum = 0;
    for (Report r : reports) sum += probs_[r.mask];
    return sum;
  }

  // p(X(y)).
  Scalar mass_consistent(const Summary& y) const {
    Scalar sum = 0;
    for (std::uint32_t m = 0; m < probs_.size(); ++m)
      if (y.consistent_with(Report{m})) sum += probs_[m];
    return sum;
  }

private:
  Alphabet alphabet_;
  std::vector<Scalar> probs_;
};

using RationalDistribution = Distribution<Rational>;
using RealDistribution = Distribution<double>;

// Summary interpretation i_y: p conditioned on X(y); zero outside X(y).
template <class Scalar>
struct Interpretation {
  Summary summary;
  std::vector<Scalar> probs;  // indexed by report mask

  const Scalar& operator[](Report x) const { return probs[x.mask]; }
};

template <class Scalar>
Interpretation<Scalar> interpretation(const Distribution<Scalar>& p, const Summary& y) {
  validate_summary(p.alphabet(), y);
  const Scalar denom = p.mass_consistent(y);
  if (denom == 0)
    throw undefined_interpretation_error("summary has zero probability under p");
  Interpretation<Scalar> out{y, std::vector<Scalar>(p.probs().size(), Scalar(0))};
  for (std::uint32_t m = 0; m < out.probs.size(); ++m)
    if (y.consistent_with(Report{m})) out.probs[m] = p[Report{m}] / denom;
  return out;
}

}  // namespace semsum
