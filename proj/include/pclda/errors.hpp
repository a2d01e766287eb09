#pragma once

#include <stdexcept>
#include <string>

namespace pclda {

// Malformed text input (bad header line, short vocab file, ...).
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Index outside the range declared by the input (docId > D, wordId > V).
struct bounds_error : std::out_of_range {
  explicit bounds_error(const std::string& what) : std::out_of_range(what) {}
};

// A value that is syntactically fine but semantically invalid (count <= 0).
struct value_error : std::invalid_argument {
  explicit value_error(const std::string& what) : std::invalid_argument(what) {}
};

// Mathematical domain violation (shape <= 0, u past the last cumulative cell).
struct domain_error : std::invalid_argument {
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Internal state inconsistency (count > 0 where an indicator is 0).
struct state_error : std::logic_error {
  explicit state_error(const std::string& what) : std::logic_error(what) {}
};

// File/stream failure; message carries the path.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Series too short for the requested estimator.
struct insufficient_data : std::invalid_argument {
  explicit insufficient_data(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace pclda
