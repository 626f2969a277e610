#pragma once

#include <stdexcept>
#include <string>

namespace ndsid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NDSID_DEFINE_ERROR(Name)                 \
  class Name : public Error {                    \
   public:                                       \
    using Error::Error;                          \
  }

NDSID_DEFINE_ERROR(DivisionByZeroFunction);
NDSID_DEFINE_ERROR(SingularMatrix);
NDSID_DEFINE_ERROR(ShapeMismatch);
NDSID_DEFINE_ERROR(InvalidIndex);
NDSID_DEFINE_ERROR(NotSquare);
NDSID_DEFINE_ERROR(IllPosedSubsystem);
NDSID_DEFINE_ERROR(IllPosedNds);
NDSID_DEFINE_ERROR(PreconditionViolated);
NDSID_DEFINE_ERROR(FactorizationInvalid);
NDSID_DEFINE_ERROR(InvalidParam);
NDSID_DEFINE_ERROR(SamplingExhausted);
NDSID_DEFINE_ERROR(PoleOnGrid);
NDSID_DEFINE_ERROR(DivergentSimulation);
NDSID_DEFINE_ERROR(ParseError);
// Raised when an internal consistency check fails, e.g. a witness that does
// not reproduce the transfer function it was derived from.
NDSID_DEFINE_ERROR(InternalError);

#undef NDSID_DEFINE_ERROR

}  // namespace ndsid
