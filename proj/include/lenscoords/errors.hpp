#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lens {

enum class ErrorCode {
  LengthMismatch,
  DimensionMismatch,
  ModulusMismatch,
  NonSquare,
  InvalidArgument,
  OutsideDisc,
  DuplicateSeeds,
  AsymmetricInput,
  NotPrime,
  NoAdmissibleClass,
  EmptyDiagram,
  Uncovered,
  MissingEdge,
  CoverageFailure,
  DegenerateProjection,
  EmptyCloud,
  ZeroVector,
  NonUnitInput,
  IoFailure,
  DisconnectedGraph,
  ConfigError,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class CoverageFailure : public Error {
 public:
  explicit CoverageFailure(std::vector<std::size_t> uncovered);

  const std::vector<std::size_t>& uncovered() const noexcept { return uncovered_; }

 private:
  std::vector<std::size_t> uncovered_;
};

class DisconnectedGraph : public Error {
 public:
  explicit DisconnectedGraph(std::size_t components);

  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

}  // namespace lens
