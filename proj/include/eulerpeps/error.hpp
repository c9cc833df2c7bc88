#pragma once

#include <stdexcept>
#include <string>

namespace eulerpeps {

// Numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  DegenerateSize = 2,
  InvalidHexagon = 3,
  Normalization = 4,
  SingularBound = 5,
  SizeLimit = 6,
  Degeneracy = 7,
  ZeroState = 8,
  Symmetry = 9,
  Layout = 10,
  Config = 11,
  Io = 12,
  Internal = 13,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace eulerpeps
