#pragma once

#include <stdexcept>

namespace smd {

// Bad input data or configuration. The CLI maps this to exit status 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computed result broke one of its own invariants. Exit status 2.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace smd
