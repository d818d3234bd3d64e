#include "causalinfo/error.hpp"

namespace causalinfo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case ErrorKind::ScopeOverlap: return "ScopeOverlap";
    case ErrorKind::BadScope: return "BadScope";
    case ErrorKind::InvalidPmf: return "InvalidPmf";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::CycleCreated: return "CycleCreated";
    case ErrorKind::RangeMismatch: return "RangeMismatch";
    case ErrorKind::BadQuery: return "BadQuery";
    case ErrorKind::JointTooLarge: return "JointTooLarge";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace causalinfo
