#pragma once

#include <stdexcept>
#include <string>

namespace ess_sense {

// Base of every error thrown by the library. The CLI maps Error subclasses to
// exit code 1, except UsageError which maps to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ESS_SENSE_DEFINE_ERROR(Name)   \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  };

ESS_SENSE_DEFINE_ERROR(ParseError)
ESS_SENSE_DEFINE_ERROR(MissingDataError)
ESS_SENSE_DEFINE_ERROR(DegenerateVariableError)
ESS_SENSE_DEFINE_ERROR(TableTooLargeError)
ESS_SENSE_DEFINE_ERROR(NonRepresentableError)
ESS_SENSE_DEFINE_ERROR(DomainError)
ESS_SENSE_DEFINE_ERROR(EmptyDataError)
ESS_SENSE_DEFINE_ERROR(NormalizationError)
ESS_SENSE_DEFINE_ERROR(SizeError)
ESS_SENSE_DEFINE_ERROR(DegenerateDenominatorError)
ESS_SENSE_DEFINE_ERROR(UsageError)

#undef ESS_SENSE_DEFINE_ERROR

}  // namespace ess_sense
