#pragma once

#include <stdexcept>
#include <string>

namespace ergolin {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector support does not fit the operator's or space's index domain.
struct IncompatibleDomain : Error { using Error::Error; };

// A norm left the representable range during an orbit or a build.
struct OverflowDetected : Error { using Error::Error; };

struct HorizonTooShort : Error { using Error::Error; };

// Eigenvector series does not converge under the given weights.
struct DivergentField : Error { using Error::Error; };

struct ProductTooLarge : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct ResidualTooLarge : Error { using Error::Error; };
struct NotPeriodic : Error { using Error::Error; };
struct NotCommonPeriod : Error { using Error::Error; };
struct DependentAngles : Error { using Error::Error; };
struct TooManyAtoms : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct ScheduleTooTight : Error { using Error::Error; };

// Bad CLI/config input (maps to process exit code 1).
struct ValidationError : Error { using Error::Error; };

}  // namespace ergolin
