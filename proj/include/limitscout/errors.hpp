#pragma once

#include <stdexcept>
#include <string>

namespace limitscout {

// Caller broke a precondition (bad arguments, malformed config).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public UsageError {
public:
    using UsageError::UsageError;
};

}  // namespace limitscout
