#ifndef RACAH_ERRORS_HPP
#define RACAH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace racah {

/// Base of every error thrown by the library.
class RacahError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RACAH_DEFINE_ERROR(Name)                      \
  class Name : public RacahError {                    \
   public:                                            \
    explicit Name(const std::string& what)            \
        : RacahError(std::string(#Name ": ") + what) {} \
  }

// rw-algebra
RACAH_DEFINE_ERROR(DegenerateAlgebra);
RACAH_DEFINE_ERROR(DimensionMismatch);
// rw-irreps
RACAH_DEFINE_ERROR(SingularLambda);
RACAH_DEFINE_ERROR(SingularDenominator);
RACAH_DEFINE_ERROR(InvalidSpec);
// racah-poly
RACAH_DEFINE_ERROR(PochhammerPole);
RACAH_DEFINE_ERROR(RecurrenceBreakdown);
RACAH_DEFINE_ERROR(CoefficientPole);
RACAH_DEFINE_ERROR(PatternMismatch);
// su11-coupling
RACAH_DEFINE_ERROR(DegenerateIntermediateSpectrum);
// superintegrable-bridge
RACAH_DEFINE_ERROR(InvalidParams);
// cli
RACAH_DEFINE_ERROR(ConfigError);

#undef RACAH_DEFINE_ERROR

}  // namespace racah

#endif  // RACAH_ERRORS_HPP
