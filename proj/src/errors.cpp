#include "riots/errors.hpp"

#include <sstream>

namespace riots {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::RiskOutOfRange: return "RiskOutOfRange";
    case ErrorKind::CyclicDependency: return "CyclicDependency";
    case ErrorKind::MissingRoot: return "MissingRoot";
    case ErrorKind::InvalidId: return "InvalidId";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::ConflictingTrust: return "ConflictingTrust";
    case ErrorKind::RecursiveDecomposition: return "RecursiveDecomposition";
    case ErrorKind::NotFlat: return "NotFlat";
    case ErrorKind::NotValidated: return "NotValidated";
    case ErrorKind::EmptyUniverse: return "EmptyUniverse";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownEvent: return "UnknownEvent";
    case ErrorKind::Exploded: return "Exploded";
    case ErrorKind::MissingEventProbability: return "MissingEventProbability";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::FloorAboveCurrent: return "FloorAboveCurrent";
  }
  return "Error";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoError:
      return 4;
    case ErrorKind::SyntaxError:
    case ErrorKind::SchemaViolation:
    case ErrorKind::DuplicateId:
    case ErrorKind::DanglingReference:
    case ErrorKind::RiskOutOfRange:
    case ErrorKind::CyclicDependency:
    case ErrorKind::MissingRoot:
    case ErrorKind::InvalidId:
    case ErrorKind::UnsupportedFeature:
    case ErrorKind::ConflictingTrust:
    case ErrorKind::RecursiveDecomposition:
      return 2;
    default:
      return 3;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(message) {}

namespace {

std::string join_issues(const std::vector<Diagnostic>& issues) {
  std::ostringstream out;
  out << issues.size() << (issues.size() == 1 ? " problem" : " problems");
  for (const auto& issue : issues) {
    out << "\n  - " << to_string(issue.kind) << ": " << issue.message;
  }
  return out.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> issues)
    : Error(issues.empty() ? ErrorKind::SchemaViolation : issues.front().kind,
            join_issues(issues)),
      issues_(std::move(issues)) {}

}  // namespace riots
