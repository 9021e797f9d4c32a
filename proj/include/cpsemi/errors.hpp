#pragma once

#include <stdexcept>
#include <string>

namespace cpsemi {

// Base of every error raised by the library. code() is a stable identifier
// used by the command line front end.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

#define CPSEMI_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
  public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

CPSEMI_DEFINE_ERROR(DimensionMismatch)
CPSEMI_DEFINE_ERROR(NotHermitian)
CPSEMI_DEFINE_ERROR(NotCompletelyPositive)
CPSEMI_DEFINE_ERROR(NotEquivalent)
CPSEMI_DEFINE_ERROR(NotMinimal)
CPSEMI_DEFINE_ERROR(SingularUnit)
CPSEMI_DEFINE_ERROR(NotCpGenerator)
CPSEMI_DEFINE_ERROR(InvalidGenerator)
CPSEMI_DEFINE_ERROR(NotPreserved)
CPSEMI_DEFINE_ERROR(NotOrthogonal)
CPSEMI_DEFINE_ERROR(NoSolution)
CPSEMI_DEFINE_ERROR(DegenerateState)
CPSEMI_DEFINE_ERROR(BalanceViolated)
CPSEMI_DEFINE_ERROR(NotDissipative)
CPSEMI_DEFINE_ERROR(ImZNotPositive)
CPSEMI_DEFINE_ERROR(IncompatibleScale)
CPSEMI_DEFINE_ERROR(NotUnitary)
CPSEMI_DEFINE_ERROR(InvalidGrid)
CPSEMI_DEFINE_ERROR(GridTooCoarse)
CPSEMI_DEFINE_ERROR(WindowOverflow)
CPSEMI_DEFINE_ERROR(OrientationUnresolvable)
CPSEMI_DEFINE_ERROR(BetaNonPositive)
CPSEMI_DEFINE_ERROR(NotThermal)
CPSEMI_DEFINE_ERROR(FockTooLarge)
CPSEMI_DEFINE_ERROR(PreconditionViolated)
CPSEMI_DEFINE_ERROR(ParseError)

#undef CPSEMI_DEFINE_ERROR

}  // namespace cpsemi
