#pragma once

#include <stdexcept>
#include <string>

namespace eulersparse {

// Base class for everything this library throws on contract violations.
// Callers that only want "did it work" can catch this one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParamsError : Error {
    using Error::Error;
};

// Graph construction / structural violations.
struct SelfLoopError : Error {
    using Error::Error;
};
struct WeightOverflowError : Error {
    using Error::Error;
};
struct NotEulerianError : Error {
    using Error::Error;
};
struct NonPowerOfTwoWeightError : Error {
    using Error::Error;
};

// Parsing.
struct ParseError : Error {
    using Error::Error;
};

// Linear algebra contracts.
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct NotSymmetricError : Error {
    using Error::Error;
};
struct NotPSDError : Error {
    using Error::Error;
};
struct DisconnectedError : Error {
    using Error::Error;
};

// Cycle machinery.
struct NotACycleError : Error {
    using Error::Error;
};

// Colouring pipeline.
struct ColourOutOfRangeError : Error {
    using Error::Error;
};
struct OracleStalledError : Error {
    using Error::Error;
};
struct BranchViolationError : Error {
    using Error::Error;
};

// Brute-force verification refuses instances that would enumerate forever.
struct TooLargeError : Error {
    using Error::Error;
};

}  // namespace eulersparse
