#include "eulerpeps/error.hpp"

namespace eulerpeps {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateSize: return "degenerate-size";
    case ErrorCode::InvalidHexagon: return "invalid-hexagon";
    case ErrorCode::Normalization: return "normalization";
    case ErrorCode::SingularBound: return "singular-bound";
    case ErrorCode::SizeLimit: return "size-limit";
    case ErrorCode::Degeneracy: return "degeneracy";
    case ErrorCode::ZeroState: return "zero-state";
    case ErrorCode::Symmetry: return "symmetry";
    case ErrorCode::Layout: return "layout";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace eulerpeps
