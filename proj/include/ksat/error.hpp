#pragma once

#include <stdexcept>
#include <string>

namespace ksat {

// Raised when a sampler is asked for clause-type counts its degree sequence cannot supply.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exhaustive work refused because the instance exceeds the configured cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ksat
