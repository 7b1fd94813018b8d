#include "physarum/errors.hpp"

namespace physarum {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::SingularLaplacian: return "SingularLaplacian";
    case ErrorKind::InfeasibleShape: return "InfeasibleShape";
    case ErrorKind::KernelCostViolation: return "KernelCostViolation";
    case ErrorKind::NegativeCost: return "NegativeCost";
    case ErrorKind::ZeroDemand: return "ZeroDemand";
    case ErrorKind::NonIntegerData: return "NonIntegerData";
    case ErrorKind::SizeCap: return "SizeCap";
    case ErrorKind::NonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorKind::EnvelopeViolation: return "EnvelopeViolation";
    case ErrorKind::NotStronglyDominating: return "NotStronglyDominating";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace physarum
