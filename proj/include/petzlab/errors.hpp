#pragma once

#include <stdexcept>
#include <string>

namespace petzlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PETZLAB_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    explicit Name(const std::string& what)    \
        : Error(std::string(#Name ": ") + what) {} \
  }

// operator-core
PETZLAB_DEFINE_ERROR(NonFiniteEntry);
PETZLAB_DEFINE_ERROR(NonHermitianInput);
PETZLAB_DEFINE_ERROR(NotPositive);
PETZLAB_DEFINE_ERROR(NotNormalized);
PETZLAB_DEFINE_ERROR(ConvergenceFailure);
PETZLAB_DEFINE_ERROR(ZeroOperator);
PETZLAB_DEFINE_ERROR(InvalidP);
PETZLAB_DEFINE_ERROR(ShapeMismatch);

// channels / petz
PETZLAB_DEFINE_ERROR(DimensionMismatch);
PETZLAB_DEFINE_ERROR(NotCptp);
PETZLAB_DEFINE_ERROR(SingularSigma);

// renyi / bounds
PETZLAB_DEFINE_ERROR(InvalidAlpha);
PETZLAB_DEFINE_ERROR(UndefinedPower);
PETZLAB_DEFINE_ERROR(NonpositiveQ);
PETZLAB_DEFINE_ERROR(NegativeGap);

// sampling
PETZLAB_DEFINE_ERROR(SingularGram);

// harness / io
PETZLAB_DEFINE_ERROR(IoError);
PETZLAB_DEFINE_ERROR(MalformedInput);
PETZLAB_DEFINE_ERROR(MalformedCsv);

#undef PETZLAB_DEFINE_ERROR

}  // namespace petzlab
