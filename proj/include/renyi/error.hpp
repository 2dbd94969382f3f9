#pragma once

#include <stdexcept>
#include <string>

namespace renyi {

// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define RENYI_DEFINE_ERROR(Name)                  \
    class Name : public Error {                   \
    public:                                       \
        using Error::Error;                       \
    }

RENYI_DEFINE_ERROR(ParameterError);        // invalid family / numeric parameter
RENYI_DEFINE_ERROR(DegenerateDensityError); // zero, NaN or infinite mass
RENYI_DEFINE_ERROR(OrderError);            // r <= 0 or conjugate of r = 1
RENYI_DEFINE_ERROR(IntegrabilityError);    // integral of f^r is 0 or infinite on the grid
RENYI_DEFINE_ERROR(GridError);             // malformed or incompatible grids
RENYI_DEFINE_ERROR(ScaleError);            // scaling by zero
RENYI_DEFINE_ERROR(HypothesisError);       // order constraints violated
RENYI_DEFINE_ERROR(SimplexError);          // weights not on the open simplex
RENYI_DEFINE_ERROR(DomainError);           // closed form evaluated outside its range
RENYI_DEFINE_ERROR(TransportError);        // transport cannot be built or evaluated
RENYI_DEFINE_ERROR(ParseError);            // CSV / command-line input

#undef RENYI_DEFINE_ERROR

} // namespace renyi
