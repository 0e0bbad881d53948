#pragma once

#include <stdexcept>
#include <string>

namespace salamander {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AmbientMismatch : Error {
    using Error::Error;
};

struct NotNested : Error {
    using Error::Error;
};

struct NotWellDefined : Error {
    using Error::Error;
};

struct NotInvertible : Error {
    using Error::Error;
};

struct SourceTargetMismatch : Error {
    using Error::Error;
};

struct InvalidPair : Error {
    using Error::Error;
};

struct PreconditionUnmet : Error {
    using Error::Error;
};

struct NotExact : Error {
    using Error::Error;
};

struct NotTriplyExact : Error {
    using Error::Error;
};

struct InternalCheckFailed : Error {
    using Error::Error;
};

struct NotInvertibleAtStep : Error {
    std::size_t step;
    NotInvertibleAtStep(std::size_t k, const std::string& what)
        : Error("step " + std::to_string(k) + ": " + what), step(k) {}
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& what)
        : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + what), line(l), column(c) {}
};

}  // namespace salamander
