#pragma once

#include <stdexcept>
#include <string>

namespace aldecomp {

// Error taxonomy shared by the library and the command line tool.
// The CLI maps these onto process exit codes: InvalidArgument -> 2 (usage),
// NumericError -> 3 (numeric failure), IoError -> 4 (i/o failure).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace aldecomp
