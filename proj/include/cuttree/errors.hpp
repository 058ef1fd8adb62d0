#pragma once

#include <stdexcept>
#include <string>

namespace cuttree {

// Argument outside the mathematical domain of an operation (alpha outside
// (1,2), size-biased mass at r = 0, pointing at the root, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid input: malformed codings, non-permutations,
// incomplete traces, out-of-range indices.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact enumeration / convolution requested beyond its combinatorial guard.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Rejection sampler gave up after its attempt budget.
class RetryExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration that cannot be run (wrong model family, bad ns).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cuttree
