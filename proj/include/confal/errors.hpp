#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// poly layer
struct NotDivisible : Error {
    using Error::Error;
};
struct SyntaxError : Error {
    size_t position;
    SyntaxError(const std::string& what, size_t pos)
        : Error(what + " at position " + std::to_string(pos)), position(pos)
    {
    }
};

// distributions
struct RegionExhausted : Error {
    using Error::Error;
};
struct NotLocal : Error {
    using Error::Error;
};

// modules
struct WindowExceeded : Error {
    using Error::Error;
};
struct ZeroParameter : Error {
    using Error::Error;
};
struct BadSequence : Error {
    using Error::Error;
};
struct ZeroScale : Error {
    using Error::Error;
};

// derivations
struct VerificationFailed : Error {
    using Error::Error;
};

// classifier
struct NotShiftInvariant : Error {
    using Error::Error;
};
struct NoSolution : Error {
    using Error::Error;
};
struct PipelineStepFailed : Error {
    std::string step;
    PipelineStepFailed(const std::string& step_name, const std::string& what)
        : Error(step_name + ": " + what), step(step_name)
    {
    }
};
struct DichotomyViolated : Error {
    using Error::Error;
};
struct ShapeMismatch : Error {
    using Error::Error;
};
struct CocycleViolated : Error {
    using Error::Error;
};

// documents
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};

} // namespace confal
