#pragma once

#include <stdexcept>
#include <string>

namespace lep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad vertex, parameter outside [0,1], ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotTwoColorable : public Error {
public:
    using Error::Error;
};

/// Post-selection kept zero probability mass; the step fails with certainty.
class ImpossiblePostSelection : public Error {
public:
    using Error::Error;
};

/// Requested state would exceed the configured index-width cap.
class SizeLimitExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace lep
