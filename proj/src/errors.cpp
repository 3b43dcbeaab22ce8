#include "gapcert/errors.hpp"

namespace gapcert {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorKind::NonSymmetricHessian: return "NonSymmetricHessian";
    case ErrorKind::UncertifiedInfimum: return "UncertifiedInfimum";
    case ErrorKind::UnboundedPotential: return "UnboundedPotential";
    case ErrorKind::EmptyFeasibleGrid: return "EmptyFeasibleGrid";
    case ErrorKind::NoApplicableMethod: return "NoApplicableMethod";
    case ErrorKind::NotLogConcave: return "NotLogConcave";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::NotCentered: return "NotCentered";
    case ErrorKind::NoCertifiedEstimate: return "NoCertifiedEstimate";
    case ErrorKind::MissingCellReport: return "MissingCellReport";
    case ErrorKind::PitchTooCoarse: return "PitchTooCoarse";
    case ErrorKind::MeshNotConverged: return "MeshNotConverged";
    case ErrorKind::SingularMass: return "SingularMass";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::ColumnMissing: return "ColumnMissing";
    case ErrorKind::BranchMismatch: return "BranchMismatch";
    case ErrorKind::UncertifiedResultUnderCertifiedPolicy:
      return "UncertifiedResultUnderCertifiedPolicy";
  }
  return "UnknownError";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SchemaError:
    case ErrorKind::ColumnMissing:
      return 2;
    case ErrorKind::UncertifiedResultUnderCertifiedPolicy:
    case ErrorKind::NoCertifiedEstimate:
      return 4;
    default:
      return 3;
  }
}

} // namespace gapcert
