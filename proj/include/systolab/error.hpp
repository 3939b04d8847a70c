#pragma once

#include <stdexcept>
#include <string>

namespace systolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SYSTOLAB_ERROR(Name)                  \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

SYSTOLAB_ERROR(InvalidArgument);
SYSTOLAB_ERROR(InvalidType);
SYSTOLAB_ERROR(NotMember);
SYSTOLAB_ERROR(NotSquarefree);
SYSTOLAB_ERROR(NotIrreducible);
SYSTOLAB_ERROR(PrecisionExhausted);
SYSTOLAB_ERROR(FactorizationFailure);
SYSTOLAB_ERROR(Unsupported);
SYSTOLAB_ERROR(RankDeficient);
SYSTOLAB_ERROR(SingularMatrix);
SYSTOLAB_ERROR(BadPrime);
SYSTOLAB_ERROR(NonPrime);
SYSTOLAB_ERROR(DomainError);
SYSTOLAB_ERROR(InsufficientData);
SYSTOLAB_ERROR(BudgetExhausted);
SYSTOLAB_ERROR(IoError);
SYSTOLAB_ERROR(ParseError);

#undef SYSTOLAB_ERROR

}  // namespace systolab
