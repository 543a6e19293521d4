#pragma once

#include <stdexcept>
#include <string>

namespace semsum {

// Malformed scenario/configuration input. The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested work exceeds an enumeration cap. The CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// p(X(y)) = 0: the summary cannot occur under p, so its interpretation is undefined.
class undefined_interpretation_error : public std::domain_error {
public:
  explicit undefined_interpretation_error(const std::string& what) : std::domain_error(what) {}
};

// Factorial-ratio series parameters outside the convergence region (c < b + 2).
class series_divergence_error : public std::domain_error {
public:
  explicit series_divergence_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace semsum
