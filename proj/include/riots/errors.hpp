#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace riots {

// Failure categories surfaced by the library. The CLI maps each category
// onto a process exit code: document and graph problems exit 2, analysis
// problems exit 3, I/O problems exit 4.
enum class ErrorKind {
  IoError,
  SyntaxError,
  SchemaViolation,
  DuplicateId,
  DanglingReference,
  RiskOutOfRange,
  CyclicDependency,
  MissingRoot,
  InvalidId,
  UnsupportedFeature,
  ConflictingTrust,
  RecursiveDecomposition,
  NotFlat,
  NotValidated,
  EmptyUniverse,
  OutOfRange,
  UnknownEvent,
  Exploded,
  MissingEventProbability,
  TooLarge,
  FloorAboveCurrent,
};

const char* to_string(ErrorKind kind);

// Exit code the CLI uses for an error of this kind (2, 3 or 4).
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }
  // The message without the kind prefix that what() carries.
  const std::string& message() const { return message_; }

  // Where the error arose (a pipeline stage or an input path); set once by
  // the outermost layer that knows, empty otherwise.
  const std::string& stage() const { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

 private:
  ErrorKind kind_;
  std::string message_;
  std::string stage_;
};

struct Diagnostic {
  ErrorKind kind = ErrorKind::SchemaViolation;
  std::string message;
};

// Thrown by build_graph with every problem found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> issues);
  const std::vector<Diagnostic>& issues() const { return issues_; }

 private:
  std::vector<Diagnostic> issues_;
};

}  // namespace riots
