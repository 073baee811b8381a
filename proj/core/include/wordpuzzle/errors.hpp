#pragma once

#include <stdexcept>
#include <string>

namespace wordpuzzle {

/// Bad user input: malformed files, out-of-range parameters, violated
/// preconditions. The command-line tool maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed a post-hoc check. Exit code 3.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wordpuzzle
