#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

// Shapes of two operands do not fit the requested operation.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotHermitian : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Jump operators are not normal or do not commute pairwise.
class NotDephasing : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed scenario document, unknown builder, or invalid parameter.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A propagated state left the set of density matrices beyond tolerance.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qsl
