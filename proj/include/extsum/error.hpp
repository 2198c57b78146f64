#pragma once

#include <stdexcept>
#include <string>

namespace extsum {

// Anticipated data/validation failure. The CLI maps these to exit code 2;
// anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace extsum
