#pragma once

#include <stdexcept>

namespace pearl {

// Usage or configuration problem; the CLI exits with code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data (bad JSON, missing fields); CLI exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed but invalid data (duplicate ids, broken invariants); CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Generation backend failure (transport, bad status, malformed reply); CLI exit code 3.
struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pearl
