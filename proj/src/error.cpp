#include "collabnet/error.hpp"

namespace collabnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::identifier: return "identifier";
    case ErrorCode::duplicate_identifier: return "duplicate_identifier";
    case ErrorCode::shape: return "shape";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::separation: return "separation";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::config: return "config";
    case ErrorCode::spec: return "spec";
  }
  return "unknown";
}

}  // namespace collabnet
