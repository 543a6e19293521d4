#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace semsum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(std::uint64_t n);

// binomial(n, k); 0 when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace semsum
