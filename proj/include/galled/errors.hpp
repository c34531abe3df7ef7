#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace galled {

// Malformed or inconsistent user input (bad ids, taxa mismatch, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text that could not be parsed. `position` is a byte offset for Newick and a
// 1-based line number for line-oriented formats.
class ParseError : public InputError {
 public:
  enum class Unit { byte, line };

  ParseError(const std::string& what, std::size_t position, Unit unit)
      : InputError(what + (unit == Unit::byte ? " (at byte " : " (at line ") +
                   std::to_string(position) + ")"),
        position_(position),
        unit_(unit) {}

  std::size_t position() const { return position_; }
  Unit unit() const { return unit_; }

 private:
  std::size_t position_;
  Unit unit_;
};

// A structure violating the LGT network model (e.g. a transfer edge between
// comparable nodes).
class ModelError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace galled
