#pragma once

#include <stdexcept>
#include <string>

namespace krr {

enum class ErrorKind {
  ParseError,
  ValueError,
  DuplicateCell,
  EmptyReplication,
  ReplicationMismatch,
  BadReplicationCount,
  IncompleteData,
  ScaleMismatch,
  AggregationTie,
  BadRedundancy,
  InsufficientDesign,
  InsufficientPairs,
  DegenerateData,
  SBDomainError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exit code contract: 0 success, 1 analysis finding, 2 usage/parse error.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return krr::exit_code(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValueError: return "ValueError";
    case ErrorKind::DuplicateCell: return "DuplicateCell";
    case ErrorKind::EmptyReplication: return "EmptyReplication";
    case ErrorKind::ReplicationMismatch: return "ReplicationMismatch";
    case ErrorKind::BadReplicationCount: return "BadReplicationCount";
    case ErrorKind::IncompleteData: return "IncompleteData";
    case ErrorKind::ScaleMismatch: return "ScaleMismatch";
    case ErrorKind::AggregationTie: return "AggregationTie";
    case ErrorKind::BadRedundancy: return "BadRedundancy";
    case ErrorKind::InsufficientDesign: return "InsufficientDesign";
    case ErrorKind::InsufficientPairs: return "InsufficientPairs";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::SBDomainError: return "SBDomainError";
  }
  return "Error";
}

inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    // Malformed input or a request the data can never satisfy.
    case ErrorKind::ParseError:
    case ErrorKind::ValueError:
    case ErrorKind::DuplicateCell:
    case ErrorKind::BadReplicationCount:
    case ErrorKind::BadRedundancy:
    case ErrorKind::ScaleMismatch:
    case ErrorKind::SBDomainError:
      return 2;
    // Well-formed data that fails an analysis precondition.
    case ErrorKind::EmptyReplication:
    case ErrorKind::ReplicationMismatch:
    case ErrorKind::IncompleteData:
    case ErrorKind::AggregationTie:
    case ErrorKind::InsufficientDesign:
    case ErrorKind::InsufficientPairs:
    case ErrorKind::DegenerateData:
      return 1;
  }
  return 2;
}

}  // namespace krr
