#ifndef FENCENAT_ERRORS_HPP
#define FENCENAT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fencenat {

// Thrown when an operation's stated precondition is violated (bad generator
// index, wrong class membership, malformed representation, ...).  The CLI
// maps these to exit code 2.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown by the textual parsers; carries the byte offset of the offending
// token so callers can point at it.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Thrown when an internal consistency check fails (a constructed map does not
// satisfy the structure its derivation promised).  Reaching this indicates a
// bug in the library, never bad user input.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fencenat

#endif  // FENCENAT_ERRORS_HPP
