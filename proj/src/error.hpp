#pragma once

#include <stdexcept>
#include <string>

namespace curvnd {

enum class Errc {
  InvalidArgument = 1,
  DimensionMismatch,
  DependentInput,
  ChainViolation,
  SingularBasis,
  RankDeficient,
  NonOrthonormalBases,
  TraceViolation,
  NotNondegenerate,
  BadDimensions,
  ParseError,
  EmptyGuard,
  ZeroMeasure,
  InsufficientSamples,
  NonUnitDeterminant,
  BudgetExhausted,
  Io,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc c, const std::string& what);
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] void fail(Errc c, const std::string& what);

}  // namespace curvnd
