#include "lenscoords/errors.hpp"

namespace lens {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutsideDisc: return "OutsideDisc";
    case ErrorCode::DuplicateSeeds: return "DuplicateSeeds";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NoAdmissibleClass: return "NoAdmissibleClass";
    case ErrorCode::EmptyDiagram: return "EmptyDiagram";
    case ErrorCode::Uncovered: return "Uncovered";
    case ErrorCode::MissingEdge: return "MissingEdge";
    case ErrorCode::CoverageFailure: return "CoverageFailure";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonUnitInput: return "NonUnitInput";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

CoverageFailure::CoverageFailure(std::vector<std::size_t> uncovered)
    : Error(ErrorCode::CoverageFailure,
            std::to_string(uncovered.size()) + " point(s) not covered by the landmark balls"),
      uncovered_(std::move(uncovered)) {}

DisconnectedGraph::DisconnectedGraph(std::size_t components)
    : Error(ErrorCode::DisconnectedGraph,
            "neighborhood graph has " + std::to_string(components) + " connected components"),
      components_(components) {}

}  // namespace lens
