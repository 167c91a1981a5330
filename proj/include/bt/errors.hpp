#pragma once

#include <stdexcept>
#include <string>

namespace bt {

// Numeric failures map to CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotBT : NumericError {
    using NumericError::NumericError;
};
struct NonGenericBT : NumericError {
    using NumericError::NumericError;
};
struct InconsistentSystem : NumericError {
    using NumericError::NumericError;
};
struct SingularSystem : NumericError {
    using NumericError::NumericError;
};
struct NoConvergence : NumericError {
    using NumericError::NumericError;
};

}  // namespace bt
