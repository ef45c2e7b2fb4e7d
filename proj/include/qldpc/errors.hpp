#pragma once

#include <stdexcept>
#include <string>

namespace qldpc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct CapacityError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct CssViolation : Error {
    using Error::Error;
};
struct CommutationError : Error {
    using Error::Error;
};
struct LiftError : Error {
    using Error::Error;
};
struct EmptyLogicalSpace : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct PolicyError : Error {
    using Error::Error;
};
struct InconsistentSyndrome : Error {
    using Error::Error;
};

}  // namespace qldpc
