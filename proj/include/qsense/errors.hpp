#pragma once

#include <stdexcept>
#include <string>

namespace qsense {

// Bad caller input: non-finite arguments, mismatched dimensions, invalid
// parameters. Maps to the CLI's configuration exit code.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested quantity is not defined for this input (e.g. Fisher
// information of a density with jumps).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical routine could not produce a meaningful result: singular
// denominators, zero-evidence updates, infeasible Sylvester pairs, flat
// objectives.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pulse would move population past the motional cutoff.
class TruncationError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace qsense
