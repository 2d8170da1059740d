#pragma once

#include <stdexcept>
#include <string>

namespace macdonald {

// Precondition violated by the caller.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Iteration or quadrature failed to converge, or a cross-check disagreed.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace macdonald
