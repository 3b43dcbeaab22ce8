#pragma once

#include <stdexcept>
#include <string>

namespace gapcert {

/// Failure taxonomy shared by all modules. Each kind maps to a process exit
/// code: config/schema problems exit 2, certification policy violations exit 4,
/// everything numerical exits 3.
enum class ErrorKind {
  SchemaError,
  NonIntegrable,
  QuadratureFailure,
  UnsupportedGeometry,
  NonSymmetricHessian,
  UncertifiedInfimum,
  UnboundedPotential,
  EmptyFeasibleGrid,
  NoApplicableMethod,
  NotLogConcave,
  DimensionTooSmall,
  NotCentered,
  NoCertifiedEstimate,
  MissingCellReport,
  PitchTooCoarse,
  MeshNotConverged,
  SingularMass,
  ZeroVariance,
  ColumnMissing,
  BranchMismatch,
  UncertifiedResultUnderCertifiedPolicy,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// Process exit code for an error kind (see RunConfig contract).
int exit_code_for(ErrorKind kind);

} // namespace gapcert
