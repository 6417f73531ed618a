#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpwmi {

enum class ErrorCode {
  ParseError,
  EqualityUnsupported,
  TooManyVariables,
  ConstantAtom,
  NameCollision,
  NotATree,
  UnboundedDomain,
  UnknownRoot,
  MissingInput,
  InconsistentMarginals,
  ZeroPartition,
  NonConformingQuery,
  ZeroConditionProbability,
  TooLarge,
  InvalidConfig,
  Timeout,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EqualityUnsupported: return "EqualityUnsupported";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::ConstantAtom: return "ConstantAtom";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::UnboundedDomain: return "UnboundedDomain";
    case ErrorCode::UnknownRoot: return "UnknownRoot";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::InconsistentMarginals: return "InconsistentMarginals";
    case ErrorCode::ZeroPartition: return "ZeroPartition";
    case ErrorCode::NonConformingQuery: return "NonConformingQuery";
    case ErrorCode::ZeroConditionProbability: return "ZeroConditionProbability";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Timeout: return "Timeout";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the primal graph has a cycle; `cycle` lists the variable
/// names along it, first vertex not repeated.
class NotATreeError : public Error {
 public:
  explicit NotATreeError(std::vector<std::string> cycle)
      : Error(ErrorCode::NotATree, describe(cycle)), cycle_(std::move(cycle)) {}

  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  static std::string describe(const std::vector<std::string>& cycle) {
    std::string s = "primal graph has a cycle:";
    for (const auto& v : cycle) s += " " + v;
    if (!cycle.empty()) s += " " + cycle.front();
    return s;
  }

  std::vector<std::string> cycle_;
};

}  // namespace mpwmi
