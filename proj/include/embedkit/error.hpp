#pragma once

#include <stdexcept>
#include <string>

namespace embedkit {

// Single error type for recoverable failures: bad input files, shape
// mismatches, invalid configuration. The CLI maps these to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

}  // namespace embedkit
