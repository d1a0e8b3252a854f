#pragma once

#include <stdexcept>
#include <string>

namespace bplab {

/// Invalid grid or run configuration (bad n, bad key=value line, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a precondition (nonzero mean vorticity, wrong region, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (xi = 0, mu outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bplab
