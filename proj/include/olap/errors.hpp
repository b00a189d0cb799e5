#pragma once

#include <stdexcept>
#include <string>

namespace olap {

/// Invalid parameter combination (radix-bit budget, thread counts, unknown names).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or truncated on-disk data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The host lacks a capability the caller asked for (ISA extension, NUMA nodes, cores).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace olap
