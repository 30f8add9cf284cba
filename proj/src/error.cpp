#include "error.hpp"

namespace curvnd {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DependentInput: return "DependentInput";
    case Errc::ChainViolation: return "ChainViolation";
    case Errc::SingularBasis: return "SingularBasis";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NonOrthonormalBases: return "NonOrthonormalBases";
    case Errc::TraceViolation: return "TraceViolation";
    case Errc::NotNondegenerate: return "NotNondegenerate";
    case Errc::BadDimensions: return "BadDimensions";
    case Errc::ParseError: return "ParseError";
    case Errc::EmptyGuard: return "EmptyGuard";
    case Errc::ZeroMeasure: return "ZeroMeasure";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::NonUnitDeterminant: return "NonUnitDeterminant";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc c, const std::string& what)
    : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}

void fail(Errc c, const std::string& what) { throw Error(c, what); }

}  // namespace curvnd
