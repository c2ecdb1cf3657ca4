#pragma once

#include <stdexcept>
#include <string>

namespace kb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter validation: names the violated field.
struct OutOfRange : Error {
    std::string field;
    explicit OutOfRange(const std::string& f, const std::string& why)
        : Error("out of range: " + f + " (" + why + ")"), field(f) {}
};

struct DomainError : Error {
    using Error::Error;
};

struct SingularTime : Error {
    using Error::Error;
};

struct SingularAngle : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : Error {
    using Error::Error;
};

struct DegeneratePair : Error {
    using Error::Error;
};

struct PVDivergence : Error {
    using Error::Error;
};

struct PreconditionViolated : Error {
    using Error::Error;
};

struct NoCore : Error {
    using Error::Error;
};

struct BlowUp : Error {
    using Error::Error;
};

struct CalibrationFailed : Error {
    using Error::Error;
};

struct WrongRegime : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace kb
