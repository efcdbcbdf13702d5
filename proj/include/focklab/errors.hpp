#pragma once

#include <stdexcept>
#include <string>

namespace focklab {

struct FockError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define FOCKLAB_ERROR(Name)                         \
    struct Name : FockError {                       \
        explicit Name(const std::string& what)      \
            : FockError(std::string(#Name ": ") + what) {} \
    }

FOCKLAB_ERROR(Inconsistent);
FOCKLAB_ERROR(DimensionMismatch);
FOCKLAB_ERROR(DegreeOverflow);
FOCKLAB_ERROR(NotInvertible);
FOCKLAB_ERROR(NotASquare);
FOCKLAB_ERROR(PrecisionExhausted);
FOCKLAB_ERROR(WindowTooNarrow);
FOCKLAB_ERROR(NonzeroResidue);
FOCKLAB_ERROR(NotSymmetric);
FOCKLAB_ERROR(NotSymplectic);
FOCKLAB_ERROR(NotPositive);
FOCKLAB_ERROR(BasisNotQuasiSymplectic);
FOCKLAB_ERROR(NoIsotropicLift);
FOCKLAB_ERROR(NotReduced);
FOCKLAB_ERROR(NotScalar);
FOCKLAB_ERROR(RepeatedRoots);
FOCKLAB_ERROR(WrongDegree);
FOCKLAB_ERROR(DegenerateFrame);
FOCKLAB_ERROR(NotSymplecticFrame);
FOCKLAB_ERROR(IdentityFailed);
FOCKLAB_ERROR(ParseError);
FOCKLAB_ERROR(UnknownSuite);
FOCKLAB_ERROR(InvalidParams);

#undef FOCKLAB_ERROR

}  // namespace focklab
