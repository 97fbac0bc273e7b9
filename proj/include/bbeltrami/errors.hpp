#pragma once

#include <stdexcept>
#include <string>

namespace bbeltrami {

/// Invalid input to a constructor or operation (bad eigenvalue, off-shell
/// mode, malformed spec).  Maps to the CLI usage/spec exit status.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical check could not be carried out or failed in a way that is a
/// property of the input, e.g. a vanishing field or a non-Morse audit.
class CheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bbeltrami
