#pragma once

#include <stdexcept>
#include <string>

namespace lexiport {

// Base for every data-level failure: bad files, broken invariants, I/O.
// The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexiport
