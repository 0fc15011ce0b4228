#pragma once

#include <stdexcept>
#include <string>

namespace fmab {

// Size/mode limits of exact diagnostics (e.g. subset enumeration caps).
// Distinct from std::invalid_argument so the CLI can map them to a
// different exit code.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent configuration input (files or flags).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fmab
